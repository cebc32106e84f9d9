// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero
// if any required criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tensilex/baseline.hpp"
#include "tensilex/cli/app.hpp"
#include "tensilex/corpus.hpp"
#include "tensilex/metrics.hpp"
#include "tensilex/optimizer.hpp"
#include "tensilex/scorer.hpp"

namespace {

using namespace tensilex;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// 1 ------------------------------------------------------------------------
Outcome worked_metrics() {
  const auto start = Clock::now();
  const auto s = PairedSeries::from_ints(std::vector<int>{1, 5, 5, 5}, std::vector<int>{1, 5, 5, 1});
  const auto r = pearson(s);
  const double m = mad(s);
  const double ms = ms_since(start);
  const bool ok = r && std::fabs(*r - 0.577) <= 0.001 && m == 1.0 && ms < 1.0;
  return {ok, fmt("pearson=%.6f mad=%.6f time=%.3fms (limit 1ms)", r.value_or(NAN), m, ms)};
}

// 2 ------------------------------------------------------------------------
Outcome worked_scoring() {
  const auto start = Clock::now();
  const Scorer scorer(testing::worked_example_lexicon());
  const std::vector<std::pair<std::string, DualScore>> cases = {
      {"Almost home and the train is delayed", {-3, 1}},
      {"Fell asleep and messed my hair up", {-1, 4}},
      {"Never trust a man with a filthy kitchen", {-2, 1}},
  };
  bool ok = true;
  std::string got;
  for (const auto& [text, expected] : cases) {
    const auto s = scorer.score_text(text).score;
    ok = ok && s == expected;
    got += fmt("(%d,%d)", s.stress, s.relaxation);
  }
  const double ms = ms_since(start);
  return {ok && ms < 10.0, "scores " + got + fmt(" time=%.3fms (limit 10ms)", ms)};
}

// 3 ------------------------------------------------------------------------
Outcome range_safety() {
  auto lex = testing::rich_lexicon();
  lex.emoticons.push_back({"!!", PhraseKind::Stress, 3});
  const Scorer scorer(lex);
  std::uint64_t state = 0xACCE55;
  const std::string words = "delayed worried calm relax not very extremely chill out on edge :) :( ! ?";
  std::size_t bad_range = 0, bad_replay = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    const auto len = testing::next_below(state, 160);
    for (std::uint64_t j = 0; j < len; ++j) {
      if (testing::next_below(state, 4) == 0) {
        const auto at = testing::next_below(state, words.size());
        text += words.substr(at, 1 + testing::next_below(state, 8));
      } else {
        text.push_back(static_cast<char>(testing::next_below(state, 256)));
      }
    }
    const auto scored = scorer.score_text(text);
    const auto s = scored.score;
    if (s.stress < -5 || s.stress > -1 || s.relaxation < 1 || s.relaxation > 5) ++bad_range;
    if (replay(scored.trace) != s || scored.trace.score != s) ++bad_replay;
  }
  return {bad_range == 0 && bad_replay == 0,
          fmt("10000 inputs, %zu out of range, %zu replay mismatches", bad_range, bad_replay)};
}

// 4 ------------------------------------------------------------------------
Outcome optimizer_recovery() {
  const auto start = Clock::now();
  const auto setup = testing::make_synthetic(200, 25, 0x5EED);
  auto perturbed = setup.reference;
  std::uint64_t state = 77;
  std::set<std::pair<int, std::size_t>> chosen;
  while (chosen.size() < 5) {
    const int kind = static_cast<int>(testing::next_below(state, 2));
    const std::size_t idx = testing::next_below(state, 25);
    if (!chosen.insert({kind, idx}).second) continue;
    auto& e = perturbed.terms(kind == 0 ? AffectKind::Stress : AffectKind::Relaxation)[idx];
    const int up = e.strength + 1, down = e.strength - 1;
    e.strength = (up <= 5 && (down < 1 || testing::next_below(state, 2) == 0)) ? up : down;
  }
  const auto reference_error = total_absolute_error(setup.reference, setup.corpus);
  const auto injected = total_absolute_error(perturbed, setup.corpus) - reference_error;
  const auto result = hill_climb(perturbed, setup.corpus, OptimizerConfig{.seed = 2024});
  const auto& r = result.report;
  bool decreasing = true;
  std::int64_t previous = r.initial_error;
  for (const auto& c : r.changes) {
    decreasing = decreasing && c.error_before == previous && previous - c.error_after >= 2;
    previous = c.error_after;
  }
  const double reduction =
      injected > 0 ? static_cast<double>(r.initial_error - r.final_error) / static_cast<double>(injected) : 0.0;
  const double ms = ms_since(start);
  const bool ok = injected > 0 && reduction >= 0.8 && r.passes_run <= 20 && decreasing && ms < 10000;
  return {ok, fmt("injected error %lld, %lld -> %lld (%.1f%% recovered), %d passes, %d changes, "
                  "strictly decreasing by >=2: %s, time=%.0fms (limit 10s)",
                  static_cast<long long>(injected), static_cast<long long>(r.initial_error),
                  static_cast<long long>(r.final_error), 100 * reduction, r.passes_run, r.changes_made,
                  decreasing ? "yes" : "no", ms)};
}

// 5 ------------------------------------------------------------------------
Outcome agreement_oracle() {
  const auto start = Clock::now();
  std::uint64_t state = 0xA1FA;
  double worst = 0;
  int compared = 0;
  for (int m = 0; m < 100; ++m) {
    const std::size_t items = 2 + testing::next_below(state, 12);
    const std::size_t coders = 2 + testing::next_below(state, 3);
    const bool stress = m % 2 == 0;
    CodingMatrix matrix{{}, stress ? -5 : 1, stress ? -1 : 5};
    for (std::size_t i = 0; i < items; ++i) {
      std::vector<std::optional<int>> row;
      for (std::size_t c = 0; c < coders; ++c) {
        if (testing::next_below(state, 6) == 0) {
          row.push_back(std::nullopt);
        } else {
          row.push_back(matrix.min_code + static_cast<int>(testing::next_below(state, 5)));
        }
      }
      matrix.cells.push_back(row);
    }
    double oracle = 0;
    bool pairable = false;
    for (const auto& row : matrix.cells) {
      pairable = pairable || std::count_if(row.begin(), row.end(), [](auto c) { return c.has_value(); }) >= 2;
    }
    if (!pairable) continue;
    oracle = testing::brute_force_alpha(matrix, AlphaMetric::Linear);
    worst = std::max(worst, std::fabs(krippendorff_alpha(matrix) - oracle));
    ++compared;
  }
  const CodingMatrix perfect{{{2, 2, 2}, {5, 5, 5}, {1, 1, 1}, {3, 3, std::nullopt}}, 1, 5};
  const double one = krippendorff_alpha(perfect);
  const double ms = ms_since(start);
  const bool ok = compared >= 90 && worst <= 1e-9 && one == 1.0 && ms < 1000;
  return {ok, fmt("%d matrices, max |alpha - oracle| = %.2e, perfect agreement alpha = %.3f, time=%.1fms (limit 1s)",
                  compared, worst, one, ms)};
}

// 6 ------------------------------------------------------------------------
Outcome crossval_determinism() {
  const auto start = Clock::now();
  testing::TempDir dir;
  auto setup = testing::make_synthetic(300, 25, 0xC0FFEE);
  std::uint64_t state = 6;
  for (auto& ex : setup.corpus) {
    if (testing::next_below(state, 5) == 0) {
      ex.gold_relax = 1 + static_cast<int>(testing::next_below(state, 5));
      ex.coder_relax = {ex.gold_relax};
      ex.gold_relax_raw = ex.gold_relax;
    }
  }
  auto start_lex = setup.reference;
  for (auto& e : start_lex.stress_terms) e.strength = 3;
  save_lexicon_set(start_lex, dir / "lexicon");
  {
    std::ostringstream out;
    write_corpus(setup.corpus, out);
    testing::write_text(dir / "corpus.tsv", out.str());
  }

  std::vector<std::string> reports;
  for (const auto* log : {"log1.tsv", "log2.tsv"}) {
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::run({"evaluate", "--lexicon-dir", (dir / "lexicon").string(), "--corpus",
                               (dir / "corpus.tsv").string(), "--supervised", "--k", "10", "--reps", "30",
                               "--seed", "7", "--log", (dir / log).string()},
                              in, out, err);
    if (code != 0) return {false, "evaluate failed: " + err.str()};
    reports.push_back(out.str() + testing::read_text(dir / log));
  }
  const bool identical = reports[0] == reports[1];

  // Audit the same run's fold contents.
  const auto corpus = load_corpus(dir / "corpus.tsv");
  std::size_t folds = 0, leaks = 0;
  crossval(start_lex, corpus, CrossValConfig{.k = 10, .reps = 30, .base_seed = 7},
           [&](const FoldRun& run) {
             ++folds;
             const std::set<std::string> train(run.train_ids.begin(), run.train_ids.end());
             for (const auto& id : run.test_ids) leaks += train.count(id);
           });
  const double ms = ms_since(start);
  const bool ok = identical && leaks == 0 && folds == 300 && ms < 60000;
  return {ok, fmt("two runs byte-identical: %s (%zu bytes), %zu folds audited, %zu held-out ids in training, "
                  "time=%.1fs (limit 60s)",
                  identical ? "yes" : "no", reports[0].size(), folds, leaks, ms / 1000)};
}

// 7 ------------------------------------------------------------------------
Outcome baseline_sanity() {
  const auto start = Clock::now();
  std::uint64_t state = 0xBA5E;
  const auto corpus = testing::injected_token_corpus(200, "kzq", state);
  std::vector<FeatureVector> docs;
  for (const auto& ex : corpus) docs.push_back(extract_features(ex.text));
  const auto labels = labels_for(corpus, Scale::Stress);
  const auto table = information_gain(docs, labels);
  const auto top = select_top(table, 1).ngrams;
  std::vector<bool> present;
  for (const auto& d : docs) present.push_back(d.count("kzq") > 0);
  const double oracle = testing::gain_oracle(present, labels);
  const double gain = table.gain[table.id_of("kzq")];
  const bool top_ok = top == std::vector<std::string>{"kzq"} && std::fabs(gain - oracle) <= 1e-12;

  BaselineConfig cfg;
  cfg.feature_counts = {100};
  cfg.k = 10;
  cfg.reps = 1;
  cfg.seed = 11;
  const auto cells = crossval_baseline(corpus, cfg);
  std::string accuracy;
  bool all_exact = cells.size() == 2;
  for (const auto& c : cells) {
    all_exact = all_exact && c.metrics.exact_pct == 100.0;
    accuracy += fmt(" %s=%.1f%%", std::string(to_string(c.classifier)).c_str(), c.metrics.exact_pct);
  }

  // NB posteriors on training texts and arbitrary inputs.
  const auto nb = train(ClassifierKind::NaiveBayes, docs, labels, select_top(table, 100));
  double worst = 0;
  for (int q = 0; q < 2000; ++q) {
    std::string text;
    const auto words = testing::next_below(state, 50);
    for (std::uint64_t w = 0; w < words; ++w) {
      text += testing::next_below(state, 3) ? "n" + std::to_string(testing::next_below(state, 60))
                                            : testing::random_word(state);
      text += testing::next_below(state, 10) == 0 ? ". " : " ";
    }
    if (q % 7 == 0) text += " kzq kzq kzq";
    const auto post = posterior(nb, extract_features(text));
    worst = std::max(worst, std::fabs(std::accumulate(post.begin(), post.end(), 0.0) - 1.0));
  }
  const double ms = ms_since(start);
  const bool ok = top_ok && all_exact && worst <= 1e-9 && ms < 10000;
  return {ok, fmt("top feature '%s' gain=%.15f oracle=%.15f; held-out exact:%s; max |sum(posterior)-1| = %.1e; "
                  "time=%.0fms (limit 10s)",
                  top.empty() ? "" : top[0].c_str(), gain, oracle, accuracy.c_str(), worst, ms)};
}

// 8 ------------------------------------------------------------------------
Outcome ngram_boundaries() {
  std::uint64_t state = 0xB0DE;
  const std::vector<std::string> terminators = {".", "!", "?", "...", "?!", "!!!"};
  std::size_t texts = 0, spanning = 0, mismatched = 0, checked = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::vector<std::string>> truth;
    std::string text;
    const auto sentences = 2 + testing::next_below(state, 4);
    for (std::uint64_t s = 0; s < sentences; ++s) {
      std::vector<std::string> tokens;
      const auto words = 1 + testing::next_below(state, 6);
      for (std::uint64_t w = 0; w < words; ++w) {
        tokens.push_back(testing::random_word(state, 1, 5));
        text += tokens.back();
        if (w + 1 < words && testing::next_below(state, 6) == 0) {
          text += ",";
          tokens.push_back(",");
        }
        if (w + 1 < words) text += " ";
      }
      if (testing::next_below(state, 5) == 0) {
        text += "\n";
      } else {
        const auto& t = terminators[testing::next_below(state, terminators.size())];
        text += t + " ";
        tokens.push_back(t);
      }
      truth.push_back(tokens);
    }
    ++texts;
    std::map<std::string, int> expected;
    for (const auto& g : testing::ngrams_within(truth)) ++expected[g];
    const auto fv = extract_features(text);
    for (const auto& [gram, count] : fv.ngrams) {
      ++checked;
      if (std::count(gram.begin(), gram.end(), ' ') > 0 && !expected.contains(gram)) ++spanning;
      if (expected[gram] != count) ++mismatched;
    }
    if (expected.size() != fv.ngrams.size()) ++mismatched;
  }
  return {spanning == 0 && mismatched == 0,
          fmt("%zu texts, %zu n-grams checked, %zu spanning a boundary, %zu count mismatches", texts, checked,
              spanning, mismatched)};
}

// 9 (optional) -------------------------------------------------------------
std::optional<Outcome> published_corpus() {
  const char* lexicon = std::getenv("TENSILEX_REFERENCE_LEXICON");
  const char* corpus_path = std::getenv("TENSILEX_REFERENCE_CORPUS");
  if (!lexicon || !corpus_path) return std::nullopt;
  const auto corpus = load_corpus(corpus_path);
  const auto reports = evaluate_lexicon(load_lexicon_set(lexicon), corpus);
  const bool ok = std::fabs(reports.stress.mad - 0.642) <= 0.10 && std::fabs(reports.relaxation.mad - 0.454) <= 0.10;
  return Outcome{ok, fmt("stress MAD %.3f (target 0.642 +/- 0.10), relaxation MAD %.3f (target 0.454 +/- 0.10)",
                         reports.stress.mad, reports.relaxation.mad)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example metrics", worked_metrics},
      {"worked-example scoring", worked_scoring},
      {"range safety and trace replay", range_safety},
      {"optimizer recovery", optimizer_recovery},
      {"agreement oracle", agreement_oracle},
      {"cross-validation determinism", crossval_determinism},
      {"baseline sanity", baseline_sanity},
      {"n-gram sentence boundaries", ngram_boundaries},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s [%zu] %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  try {
    if (const auto optional = published_corpus()) {
      std::printf("%s [9] published corpus MAD (optional): %s\n", optional->pass ? "PASS" : "FAIL",
                  optional->detail.c_str());
    } else {
      std::printf("SKIP [9] published corpus MAD (optional): set TENSILEX_REFERENCE_LEXICON and "
                  "TENSILEX_REFERENCE_CORPUS to run\n");
    }
  } catch (const std::exception& e) {
    std::printf("FAIL [9] published corpus MAD (optional): exception: %s\n", e.what());
  }
  std::printf("%d of %zu required criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
