#include "tensilex/cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "tensilex/baseline.hpp"
#include "tensilex/corpus.hpp"
#include "tensilex/error.hpp"
#include "tensilex/lexicon.hpp"
#include "tensilex/metrics.hpp"
#include "tensilex/optimizer.hpp"
#include "tensilex/scorer.hpp"

namespace tensilex::cli {

namespace fs = std::filesystem;

namespace {

struct ScoreOptions {
  std::string lexicon_dir;
  std::string input = "-";
  bool tsv = false;
  bool trace = false;
};

struct OptimizeOptions {
  std::string lexicon_dir;
  std::string corpus;
  std::string out_dir;
  std::string report;
  std::optional<std::uint64_t> seed;
  int min_improvement = 2;
  int max_passes = 1000;
};

struct EvaluateOptions {
  std::string lexicon_dir;
  std::string corpus;
  std::string subcorpus;
  bool unrounded = false;
  bool supervised = false;
  std::size_t k = 10;
  std::size_t reps = 30;
  std::optional<std::uint64_t> seed;
  std::string log;
  std::string crosstab;
  bool pretty = false;
  int min_improvement = 2;
  int max_passes = 1000;
};

struct AgreementOptions {
  std::string codes;
  bool interval = false;
};

struct BaselineOptions {
  std::string corpus;
  std::string classifier = "both";
  std::string features = "sweep";
  std::string scale = "both";
  std::size_t k = 10;
  std::size_t reps = 30;
  std::optional<std::uint64_t> seed;
  std::string save_model;
};

/// Thrown for command-line validation failures detected after parsing.
struct UsageError {
  std::string message;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::MissingResource:
    case ErrorCode::WriteError:
      return kIoError;
    default:
      return kValidationError;
  }
}

LexiconSet load_lexicon(std::string dir, std::ostream& err, int& status) {
  if (dir.empty()) {
    if (const char* env = std::getenv(kLexiconDirEnv)) dir = env;
  }
  if (dir.empty()) {
    err << "error: no lexicon directory (use --lexicon-dir or set " << kLexiconDirEnv << ")\n";
    status = kValidationError;
    return {};
  }
  try {
    status = kSuccess;
    return load_lexicon_set(dir);
  } catch (const Error& e) {
    err << "error: lexicon: " << e.what() << '\n';
    status = kValidationError;
    return {};
  }
}

std::string fmt(std::optional<double> v) { return format_metric(v); }

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::WriteError, "cannot write " + path.string());
}

// ---------------------------------------------------------------------------

int cmd_score(const ScoreOptions& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  int status = kSuccess;
  auto lex = load_lexicon(opt.lexicon_dir, err, status);
  if (status != kSuccess) return status;
  const Scorer scorer(std::move(lex));

  std::ifstream file;
  std::istream* source = &in;
  if (opt.input != "-") {
    file.open(opt.input, std::ios::binary);
    if (!file) {
      err << "error: cannot open input " << opt.input << '\n';
      return kIoError;
    }
    source = &file;
  }

  out << "text_id\tstress\trelaxation\n";
  std::string line;
  std::size_t number = 0;
  while (std::getline(*source, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string id = std::to_string(number);
    std::string_view text = line;
    if (opt.tsv) {
      if (const auto tab = line.find('\t'); tab != std::string::npos) {
        id = line.substr(0, tab);
        text = std::string_view(line).substr(tab + 1);
      }
    }
    const auto scored = scorer.score_text(text);
    out << id << '\t' << scored.score.stress << '\t' << scored.score.relaxation << '\n';
    if (opt.trace) err << "## " << id << '\n' << render_trace(scored.trace);
  }
  if (source->bad()) {
    err << "error: read failure on input\n";
    return kIoError;
  }
  return kSuccess;
}

int cmd_optimize(const OptimizeOptions& opt, std::ostream& out, std::ostream& err) {
  if (!opt.seed) throw UsageError{"optimize requires --seed"};
  int status = kSuccess;
  auto lex = load_lexicon(opt.lexicon_dir, err, status);
  if (status != kSuccess) return status;

  const auto corpus = load_corpus(opt.corpus);
  OptimizerConfig cfg;
  cfg.seed = *opt.seed;
  cfg.min_improvement = opt.min_improvement;
  cfg.max_passes = opt.max_passes;
  const auto result = hill_climb(lex, corpus, cfg);

  save_lexicon_set(result.lexicon, opt.out_dir);
  std::ostringstream report;
  write_report(result.report, report);
  const fs::path report_path =
      opt.report.empty() ? fs::path(opt.out_dir) / "optimization_report.tsv" : fs::path(opt.report);
  write_file(report_path, report.str());

  const auto& r = result.report;
  out << "initial_error\tfinal_error\tchanges\tpasses\tconverged\n"
      << r.initial_error << '\t' << r.final_error << '\t' << r.changes_made << '\t' << r.passes_run
      << '\t' << (r.converged ? "true" : "false") << '\n';
  err << r.changes_made << " changes in " << r.passes_run << " passes; error " << r.initial_error
      << " -> " << r.final_error << '\n';
  return kSuccess;
}

void write_crosstab(const fs::path& path, const LexiconSet& lex,
                    const std::vector<AnnotatedExample>& corpus) {
  const Scorer scorer(lex);
  std::vector<int> ps, gs, pr, gr;
  for (const auto& ex : corpus) {
    const auto s = scorer.score_text(ex.text).score;
    ps.push_back(s.stress);
    gs.push_back(ex.gold_stress);
    pr.push_back(s.relaxation);
    gr.push_back(ex.gold_relax);
  }
  std::ostringstream text;
  text << "scale\tpredicted\tgold\tpct\n";
  const auto emit = [&](std::string_view scale, const CrossTab& tab) {
    for (int a = tab.min_code; a <= tab.max_code; ++a) {
      for (int b = tab.min_code; b <= tab.max_code; ++b) {
        text << scale << '\t' << a << '\t' << b << '\t' << fmt(tab.at(a, b)) << '\n';
      }
    }
  };
  emit("stress", cross_tab(ps, gs, -kMaxStrength, -kMinStrength));
  emit("relaxation", cross_tab(pr, gr, kMinStrength, kMaxStrength));
  write_file(path, text.str());
}

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.supervised && !opt.seed) throw UsageError{"evaluate --supervised requires --seed"};
  int status = kSuccess;
  auto lex = load_lexicon(opt.lexicon_dir, err, status);
  if (status != kSuccess) return status;

  auto corpus = load_corpus(opt.corpus);
  if (!opt.subcorpus.empty()) {
    auto part = slice(corpus, opt.subcorpus);
    if (!part.label_known) {
      err << "warning: no examples with subcorpus '" << opt.subcorpus << "'\n";
      out << "scale\t" << metrics_tsv_header() << '\n';
      return kSuccess;
    }
    corpus = std::move(part.examples);
  }
  if (corpus.empty()) {
    err << "warning: corpus has no examples\n";
    out << "scale\t" << metrics_tsv_header() << '\n';
    return kSuccess;
  }

  std::vector<std::pair<std::string, MetricsReport>> rows;
  if (opt.supervised) {
    CrossValConfig cfg;
    cfg.k = opt.k;
    cfg.reps = opt.reps;
    cfg.base_seed = *opt.seed;
    cfg.unrounded = opt.unrounded;
    cfg.optimizer.min_improvement = opt.min_improvement;
    cfg.optimizer.max_passes = opt.max_passes;
    const auto result = crossval(lex, corpus, cfg);
    rows.emplace_back("stress", result.stress.as_report());
    rows.emplace_back("relaxation", result.relaxation.as_report());
    if (!opt.log.empty()) {
      std::ostringstream log;
      write_crossval_log(result, log);
      write_file(opt.log, log.str());
    }
    for (const auto* avg : {&result.stress, &result.relaxation}) {
      if (avg->pearson_skipped > 0) {
        err << "note: " << avg->pearson_skipped << " repetition(s) had an undefined correlation\n";
      }
    }
  } else {
    const auto reports = evaluate_lexicon(lex, corpus, opt.unrounded);
    rows.emplace_back("stress", reports.stress);
    rows.emplace_back("relaxation", reports.relaxation);
  }
  if (!opt.crosstab.empty()) write_crosstab(opt.crosstab, lex, corpus);

  if (opt.pretty) {
    out << to_pretty_table(rows);
  } else {
    out << "scale\t" << metrics_tsv_header() << '\n';
    for (const auto& [scale, report] : rows) out << scale << '\t' << to_tsv_row(report) << '\n';
  }
  return kSuccess;
}

std::string coder_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "C" + std::to_string(i + 1);
}

int cmd_agreement(const AgreementOptions& opt, std::ostream& out, std::ostream& err) {
  const auto codes = load_coder_codes(opt.codes);
  if (codes.stress.coders() < 2) {
    err << "error: agreement needs at least two coders per item\n";
    return kValidationError;
  }
  const auto metric = opt.interval ? AlphaMetric::Interval : AlphaMetric::Linear;
  const auto safe_alpha = [&](const CodingMatrix& m) -> std::optional<double> {
    try {
      return krippendorff_alpha(m, metric);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InsufficientData) return std::nullopt;
      throw;
    }
  };
  const auto safe_full = [&](const CodingMatrix& m) -> std::optional<double> {
    try {
      return full_agreement_pct(m);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InsufficientData) return std::nullopt;
      throw;
    }
  };

  out << "scale\tcomparison\tn\talpha\tpearson\tmad\tfull_agreement\n";
  for (const auto& [name, matrix] : {std::pair{"stress", &codes.stress},
                                     std::pair{"relaxation", &codes.relaxation}}) {
    const std::size_t coders = matrix->coders();
    for (std::size_t a = 0; a < coders; ++a) {
      for (std::size_t b = a + 1; b < coders; ++b) {
        const auto series = coder_pair_series(*matrix, a, b);
        const auto pair = matrix->pair(a, b);
        out << name << '\t' << coder_name(a) << " vs " << coder_name(b) << '\t' << series.size()
            << '\t' << fmt(safe_alpha(pair)) << '\t'
            << fmt(series.size() ? pearson(series) : std::nullopt) << '\t'
            << fmt(series.size() ? std::optional<double>(mad(series)) : std::nullopt) << '\t'
            << fmt(safe_full(pair)) << '\n';
      }
    }
    out << name << "\toverall\t" << matrix->items() << '\t' << fmt(safe_alpha(*matrix))
        << "\tNA\tNA\t" << fmt(safe_full(*matrix)) << '\n';
  }
  return kSuccess;
}

int cmd_baseline(const BaselineOptions& opt, std::ostream& out, std::ostream& err) {
  if (!opt.seed) throw UsageError{"baseline requires --seed"};
  BaselineConfig cfg;
  cfg.k = opt.k;
  cfg.reps = opt.reps;
  cfg.seed = *opt.seed;
  if (opt.classifier == "nb") {
    cfg.classifiers = {ClassifierKind::NaiveBayes};
  } else if (opt.classifier == "logistic") {
    cfg.classifiers = {ClassifierKind::Logistic};
  } else if (opt.classifier != "both") {
    throw UsageError{"--classifier must be nb, logistic or both"};
  }
  if (opt.features != "sweep") {
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoul(opt.features, &used);
      if (used != opt.features.size() || n == 0) throw std::invalid_argument("features");
    } catch (const std::exception&) {
      throw UsageError{"--features must be a positive integer or 'sweep'"};
    }
    cfg.feature_counts = {n};
  }
  std::vector<Scale> scales;
  if (opt.scale == "stress" || opt.scale == "both") scales.push_back(Scale::Stress);
  if (opt.scale == "relax" || opt.scale == "relaxation" || opt.scale == "both") {
    scales.push_back(Scale::Relaxation);
  }
  if (scales.empty()) throw UsageError{"--scale must be stress, relax or both"};

  const auto corpus = load_corpus(opt.corpus);
  std::vector<BaselineCell> cells;
  for (auto scale : scales) {
    cfg.scale = scale;
    auto part = crossval_baseline(corpus, cfg);
    cells.insert(cells.end(), part.begin(), part.end());
  }
  write_sweep(cells, out);

  if (!opt.save_model.empty()) {
    if (cfg.classifiers.size() != 1 || cfg.feature_counts.size() != 1 || scales.size() != 1) {
      throw UsageError{"--save-model needs one classifier, one --features N and one --scale"};
    }
    std::vector<FeatureVector> docs;
    for (const auto& ex : corpus) docs.push_back(extract_features(ex.text));
    const auto labels = labels_for(corpus, scales.front());
    const auto table = information_gain(docs, labels);
    const auto model = train(cfg.classifiers.front(), docs, labels,
                             select_top(table, cfg.feature_counts.front()), cfg.logistic);
    std::ostringstream text;
    save_model(model, text);
    write_file(opt.save_model, text.str());
    err << "model written to " << opt.save_model << '\n';
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stress and relaxation strength scoring for short informal texts", "tensilex"};
  app.require_subcommand(1);

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Score one text per input line");
  score_cmd->add_option("-l,--lexicon-dir", score.lexicon_dir, "Lexicon directory");
  score_cmd->add_option("input", score.input, "Input file, or - for standard input");
  score_cmd->add_flag("--tsv", score.tsv, "Input lines are id<TAB>text");
  score_cmd->add_flag("--trace", score.trace, "Write an explanation per text to standard error");

  OptimizeOptions optimize;
  auto* optimize_cmd = app.add_subcommand("optimize", "Hill-climb term strengths on a corpus");
  optimize_cmd->add_option("-l,--lexicon-dir", optimize.lexicon_dir, "Lexicon directory");
  optimize_cmd->add_option("-c,--corpus", optimize.corpus, "Annotated corpus TSV")->required();
  optimize_cmd->add_option("-o,--out", optimize.out_dir, "Output lexicon directory")->required();
  optimize_cmd->add_option("--report", optimize.report, "Report path (default OUT/optimization_report.tsv)");
  optimize_cmd->add_option("--seed", optimize.seed, "Seed for the term visiting order");
  optimize_cmd->add_option("--min-improvement", optimize.min_improvement)->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--max-passes", optimize.max_passes)->check(CLI::PositiveNumber);

  EvaluateOptions evaluate_opt;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare lexicon scores with corpus golds");
  evaluate_cmd->add_option("-l,--lexicon-dir", evaluate_opt.lexicon_dir, "Lexicon directory");
  evaluate_cmd->add_option("-c,--corpus", evaluate_opt.corpus, "Annotated corpus TSV")->required();
  evaluate_cmd->add_option("--subcorpus", evaluate_opt.subcorpus, "Only rows with this label");
  evaluate_cmd->add_flag("--unrounded", evaluate_opt.unrounded, "Use unrounded coder means");
  evaluate_cmd->add_flag("--supervised", evaluate_opt.supervised, "Cross-validate the hill-climbed lexicon");
  evaluate_cmd->add_option("--k", evaluate_opt.k, "Folds")->check(CLI::Range(2, 1000000));
  evaluate_cmd->add_option("--reps", evaluate_opt.reps, "Repetitions")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--seed", evaluate_opt.seed, "Seed for fold assignment and climbing");
  evaluate_cmd->add_option("--log", evaluate_opt.log, "Write the per-fold log here");
  evaluate_cmd->add_option("--crosstab", evaluate_opt.crosstab, "Write predicted x gold percentages here");
  evaluate_cmd->add_flag("--pretty", evaluate_opt.pretty, "Aligned table instead of TSV");
  evaluate_cmd->add_option("--min-improvement", evaluate_opt.min_improvement)->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--max-passes", evaluate_opt.max_passes)->check(CLI::PositiveNumber);

  AgreementOptions agreement;
  auto* agreement_cmd = app.add_subcommand("agreement", "Inter-coder agreement statistics");
  agreement_cmd->add_option("codes", agreement.codes, "Corpus-format file with per-coder codes")->required();
  agreement_cmd->add_flag("--interval", agreement.interval, "Squared instead of absolute differences");

  BaselineOptions baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Cross-validated n-gram classifier baseline");
  baseline_cmd->add_option("-c,--corpus", baseline.corpus, "Annotated corpus TSV")->required();
  baseline_cmd->add_option("--classifier", baseline.classifier, "nb, logistic or both");
  baseline_cmd->add_option("--features", baseline.features, "Feature count N, or sweep");
  baseline_cmd->add_option("--scale", baseline.scale, "stress, relax or both");
  baseline_cmd->add_option("--k", baseline.k, "Folds")->check(CLI::Range(2, 1000000));
  baseline_cmd->add_option("--reps", baseline.reps, "Repetitions")->check(CLI::PositiveNumber);
  baseline_cmd->add_option("--seed", baseline.seed, "Seed for fold assignment");
  baseline_cmd->add_option("--save-model", baseline.save_model, "Train on the full corpus and save");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score, in, out, err);
    if (optimize_cmd->parsed()) return cmd_optimize(optimize, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_opt, out, err);
    if (agreement_cmd->parsed()) return cmd_agreement(agreement, out, err);
    if (baseline_cmd->parsed()) return cmd_baseline(baseline, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.message << '\n';
    return kValidationError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kValidationError;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("tensilex");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

}  // namespace tensilex::cli
