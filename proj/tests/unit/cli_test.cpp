#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "fixtures.hpp"
#include "tensilex/cli/app.hpp"
#include "tensilex/corpus.hpp"

namespace tensilex {
namespace {

using testing::TempDir;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    lexicon_ = dir_ / "lexicon";
    save_lexicon_set(testing::worked_example_lexicon(), lexicon_);
  }

  std::string write_corpus_file(const std::vector<AnnotatedExample>& corpus, std::string name = "corpus.tsv") {
    std::ostringstream out;
    tensilex::write_corpus(corpus, out);
    testing::write_text(dir_ / name, out.str());
    return (dir_ / name).string();
  }

  TempDir dir_;
  std::filesystem::path lexicon_;
};

TEST_F(CliTest, ScoreWorkedExamples) {
  const auto r = run_cli({"score", "--lexicon-dir", lexicon_.string()},
                         "Almost home and the train is delayed\nFell asleep and messed my hair up\n"
                         "Never trust a man with a filthy kitchen\n");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "text_id\tstress\trelaxation\n1\t-3\t1\n2\t-1\t4\n3\t-2\t1\n");
}

TEST_F(CliTest, ScoreEmptyInputAndTrace) {
  const auto empty = run_cli({"score", "-l", lexicon_.string()});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "text_id\tstress\trelaxation\n");

  const auto traced = run_cli({"score", "-l", lexicon_.string(), "--trace"}, "Never trust a man\n");
  EXPECT_EQ(traced.code, 0);
  EXPECT_NE(traced.err.find("NegatedRelax"), std::string::npos) << traced.err;
}

TEST_F(CliTest, ScoreTsvInputAndLargeFile) {
  const auto tsv = run_cli({"score", "-l", lexicon_.string(), "--tsv"}, "t1\tso delayed\nno id here\n");
  EXPECT_EQ(tsv.out, "text_id\tstress\trelaxation\nt1\t-3\t1\n2\t-1\t1\n");

  std::string big;
  for (int i = 0; i < 10000; ++i) big += (i % 2 ? "delayed\n" : "asleep\n");
  testing::write_text(dir_ / "big.txt", big);
  const auto r = run_cli({"score", "-l", lexicon_.string(), (dir_ / "big.txt").string()});
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 10001u);
  EXPECT_EQ(rows[1], "1\t-1\t4");
  EXPECT_EQ(rows[10000], "10000\t-3\t1");
}

TEST_F(CliTest, ScoreArbitraryBytes) {
  const auto r = run_cli({"score", "-l", lexicon_.string()}, std::string("\xff\xfe\x01 delayed\x80\n", 13));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines_of(r.out).size(), 2u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({"score", "-l", (dir_ / "missing").string()}).code, 2);
  EXPECT_EQ(run_cli({"score", "-l", lexicon_.string(), (dir_ / "nope.txt").string()}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"evaluate", "-l", lexicon_.string(), "-c", (dir_ / "none.tsv").string()}).code, 1);

  testing::write_text(dir_ / "broken.tsv", "id\tsubcorpus\ttext\tstress_codes\trelax_codes\na\tg\tx\t-9\t1\n");
  EXPECT_EQ(run_cli({"evaluate", "-l", lexicon_.string(), "-c", (dir_ / "broken.tsv").string()}).code, 2);
  const auto no_seed = run_cli({"evaluate", "-l", lexicon_.string(), "-c", (dir_ / "broken.tsv").string(),
                                "--supervised"});
  EXPECT_EQ(no_seed.code, 2);
}

TEST_F(CliTest, LexiconDirFromEnvironment) {
  ::setenv(cli::kLexiconDirEnv, lexicon_.string().c_str(), 1);
  const auto r = run_cli({"score"}, "train delayed\n");
  ::unsetenv(cli::kLexiconDirEnv);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "text_id\tstress\trelaxation\n1\t-3\t1\n");
  EXPECT_EQ(run_cli({"score"}, "x\n").code, 2);
}

TEST_F(CliTest, OptimizeDeterministicAndReportsChanges) {
  const auto setup = testing::make_synthetic(60, 6, 4);
  const auto corpus = write_corpus_file(setup.corpus);
  save_lexicon_set(setup.reference, dir_ / "ref");

  const auto same = run_cli({"optimize", "-l", (dir_ / "ref").string(), "-c", corpus, "-o",
                             (dir_ / "same").string(), "--seed", "1"});
  EXPECT_EQ(same.code, 0) << same.err;
  EXPECT_NE(same.err.find("0 changes"), std::string::npos);

  auto perturbed = setup.reference;
  for (auto& e : perturbed.stress_terms) e.strength = e.strength == 1 ? 2 : e.strength - 1;
  save_lexicon_set(perturbed, dir_ / "start");
  std::vector<std::string> outputs;
  for (const auto* name : {"a", "b"}) {
    const auto r = run_cli({"optimize", "-l", (dir_ / "start").string(), "-c", corpus, "-o",
                            (dir_ / name).string(), "--seed", "5"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 2u);
    std::istringstream fields(rows[1]);
    long initial = 0, final_error = 0;
    fields >> initial >> final_error;
    EXPECT_LT(final_error, initial);
    outputs.push_back(r.out);
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  for (const auto& entry : std::filesystem::directory_iterator(dir_ / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(testing::read_text(entry.path()), testing::read_text(dir_ / "b" / name)) << name;
  }
  EXPECT_TRUE(std::filesystem::exists(dir_ / "a" / "optimization_report.tsv"));
  EXPECT_EQ(run_cli({"optimize", "-l", (dir_ / "start").string(), "-c", corpus, "-o",
                     (dir_ / "c").string()}).code,
            2);
}

TEST_F(CliTest, EvaluatePerfectAndWorkedMetricExample) {
  const auto setup = testing::make_synthetic(40, 5, 6);
  save_lexicon_set(setup.reference, dir_ / "ref");
  const auto perfect = run_cli({"evaluate", "-l", (dir_ / "ref").string(), "-c", write_corpus_file(setup.corpus)});
  EXPECT_EQ(perfect.code, 0) << perfect.err;
  const auto rows = lines_of(perfect.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "scale\tn\texact\twithin1\tpearson\tmad");
  EXPECT_EQ(rows[1].substr(0, rows[1].find('\t')), "stress");
  EXPECT_NE(rows[1].find("\t100.000\t100.000\t"), std::string::npos);
  EXPECT_EQ(rows[1].substr(rows[1].rfind('\t')), "\t0.000");

  // Relaxation predictions 1,5,5,5 against golds 1,5,5,1.
  LexiconSet lex;
  lex.relax_terms = {testing::term("bliss", AffectKind::Relaxation, 5)};
  lex.dictionary = {"bliss"};
  save_lexicon_set(lex, dir_ / "bliss");
  const std::vector<AnnotatedExample> four = {
      testing::make_example("1", "meh", {-1, 1}), testing::make_example("2", "bliss", {-1, 5}),
      testing::make_example("3", "bliss", {-1, 5}), testing::make_example("4", "bliss", {-1, 1})};
  const auto r = run_cli({"evaluate", "-l", (dir_ / "bliss").string(), "-c", write_corpus_file(four, "four.tsv")});
  EXPECT_EQ(lines_of(r.out).at(2), "relaxation\t4\t75.000\t75.000\t0.577\t1.000");
}

TEST_F(CliTest, EvaluateSubcorpus) {
  const auto setup = testing::make_synthetic(30, 4, 2);
  save_lexicon_set(setup.reference, dir_ / "ref");
  const auto corpus = write_corpus_file(setup.corpus);
  const auto r = run_cli({"evaluate", "-l", (dir_ / "ref").string(), "-c", corpus, "--subcorpus", "transport"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines_of(r.out).at(1).substr(0, 10), "stress\t10\t");

  const auto unknown = run_cli({"evaluate", "-l", (dir_ / "ref").string(), "-c", corpus, "--subcorpus", "sport"});
  EXPECT_EQ(unknown.code, 0);
  EXPECT_EQ(lines_of(unknown.out).size(), 1u);
  EXPECT_NE(unknown.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, EvaluateSupervisedWritesLogAndCrosstab) {
  const auto setup = testing::make_synthetic(40, 5, 9);
  save_lexicon_set(setup.reference, dir_ / "ref");
  const auto corpus = write_corpus_file(setup.corpus);
  const auto log = (dir_ / "cv.tsv").string();
  const auto tab = (dir_ / "tab.tsv").string();
  const auto r = run_cli({"evaluate", "-l", (dir_ / "ref").string(), "-c", corpus, "--supervised", "--k", "4",
                          "--reps", "2", "--seed", "7", "--log", log, "--crosstab", tab, "--pretty"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("relaxation"), std::string::npos);
  EXPECT_EQ(lines_of(testing::read_text(log)).size(), 1u + 2 * (4 * 2 + 2));
  EXPECT_EQ(lines_of(testing::read_text(tab)).size(), 1u + 2 * 25);
}

TEST_F(CliTest, Agreement) {
  const std::string header = "id\tsubcorpus\ttext\tstress_codes\trelax_codes\n";
  testing::write_text(dir_ / "same.tsv", header + "a\tg\tx\t-2,-2,-2\t3,3,3\nb\tg\ty\t-4,-4,-4\t1,1,1\n");
  const auto same = run_cli({"agreement", (dir_ / "same.tsv").string()});
  EXPECT_EQ(same.code, 0) << same.err;
  const auto rows = lines_of(same.out);
  ASSERT_EQ(rows.size(), 1u + 2 * 4);
  EXPECT_EQ(rows[0], "scale\tcomparison\tn\talpha\tpearson\tmad\tfull_agreement");
  EXPECT_EQ(rows[1], "stress\tA vs B\t2\t1.000\t1.000\t0.000\t100.000");
  EXPECT_EQ(rows[4], "stress\toverall\t2\t1.000\tNA\tNA\t100.000");

  testing::write_text(dir_ / "one.tsv", header + "a\tg\tx\t-2\t3\n");
  EXPECT_EQ(run_cli({"agreement", (dir_ / "one.tsv").string()}).code, 2);

  testing::write_text(dir_ / "two.tsv", header + "a\tg\tx\t-1,-5\t1,5\nb\tg\ty\t-5,-1\t5,1\n");
  const auto two = run_cli({"agreement", (dir_ / "two.tsv").string()});
  EXPECT_EQ(lines_of(two.out).at(1), "stress\tA vs B\t2\t-0.500\t-1.000\t4.000\t0.000");
}

TEST_F(CliTest, Baseline) {
  std::vector<AnnotatedExample> corpus;
  for (int i = 0; i < 30; ++i) {
    const bool marked = i % 2 == 0;
    corpus.push_back(testing::make_example(std::to_string(i), marked ? "filler zzmarker text" : "filler plain text",
                                           {marked ? -3 : -1, marked ? 1 : 4}));
  }
  const auto path = write_corpus_file(corpus);
  const std::vector<std::string> args = {"baseline", "-c", path, "--classifier", "nb", "--features", "100",
                                         "--scale", "stress", "--k", "3", "--reps", "2", "--seed", "4"};
  const auto a = run_cli(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run_cli(args).out);
  const auto rows = lines_of(a.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].substr(0, 20), "nb\tstress\t100\t30\t100");

  const auto sweep = run_cli({"baseline", "-c", path, "--k", "3", "--reps", "1", "--seed", "4"});
  EXPECT_EQ(sweep.code, 0) << sweep.err;
  EXPECT_EQ(lines_of(sweep.out).size(), 1u + 2 * 2 * 10);

  EXPECT_EQ(run_cli({"baseline", "-c", path}).code, 2);
  EXPECT_EQ(run_cli({"baseline", "-c", path, "--seed", "1", "--features", "abc"}).code, 2);
  EXPECT_EQ(run_cli({"baseline", "-c", path, "--seed", "1", "--classifier", "svm"}).code, 2);

  auto model_args = args;
  model_args.push_back("--save-model");
  model_args.push_back((dir_ / "nb.model").string());
  EXPECT_EQ(run_cli(model_args).code, 0);
  EXPECT_EQ(testing::read_text(dir_ / "nb.model").rfind("tensilex-model\t1", 0), 0u);
}

#ifdef TENSILEX_DATA_DIR
TEST(CliAssets, ShippedLexiconAndSampleCorpus) {
  const std::string data = TENSILEX_DATA_DIR;
  const auto r = run_cli({"evaluate", "-l", data + "/lexicon", "-c", data + "/examples/sample_corpus.tsv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 3u);
  const auto scored = run_cli({"score", "-l", data + "/lexicon"}, "Almost home and the train is delayed\n");
  EXPECT_EQ(lines_of(scored.out).at(1), "1\t-3\t1");
}
#endif

}  // namespace
}  // namespace tensilex
