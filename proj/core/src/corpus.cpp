#include "tensilex/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "tensilex/error.hpp"
#include "tensilex/rng.hpp"
#include "text_util.hpp"

namespace tensilex {

namespace fs = std::filesystem;

int round_mean_half_away(std::span<const int> codes) {
  if (codes.empty()) throw Error(ErrorCode::EmptySeries, "no codes to average");
  long long sum = 0;
  for (int c : codes) sum += c;
  const auto n = static_cast<long long>(codes.size());
  const long long magnitude = (2 * (sum < 0 ? -sum : sum) + n) / (2 * n);
  return static_cast<int>(sum < 0 ? -magnitude : magnitude);
}

namespace {

struct Row {
  std::size_t line;
  std::vector<std::string_view> cols;
};

// Reads the header and data rows of a corpus-format file.
template <typename OnRow>
void read_corpus_rows(std::istream& in, OnRow&& on_row) {
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    detail::strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (detail::to_lower(detail::trim(line)) != kCorpusHeader) {
        throw Error(ErrorCode::ParseError,
                    "expected header 'id<TAB>subcorpus<TAB>text<TAB>stress_codes<TAB>relax_codes'",
                    number);
      }
      header_seen = true;
      continue;
    }
    auto cols = detail::split(line, '\t');
    if (cols.size() != 5) {
      throw Error(ErrorCode::ParseError,
                  "expected 5 tab-separated columns, found " + std::to_string(cols.size()), number);
    }
    on_row(Row{number, std::move(cols)});
  }
  if (in.bad()) throw Error(ErrorCode::MissingResource, "read failure");
}

std::vector<std::optional<int>> parse_codes(std::string_view field, int lo, int hi,
                                            bool allow_missing, std::size_t line,
                                            std::string_view what) {
  std::vector<std::optional<int>> out;
  for (auto piece : detail::split(field, ',')) {
    piece = detail::trim(piece);
    if (allow_missing && (piece.empty() || piece == "NA" || piece == "na")) {
      out.emplace_back(std::nullopt);
      continue;
    }
    const auto v = detail::parse_int(piece);
    if (!v || *v < lo || *v > hi) {
      throw Error(ErrorCode::ParseError,
                  std::string(what) + " code '" + std::string(piece) + "' is not an integer in " +
                      std::to_string(lo) + ".." + std::to_string(hi),
                  line);
    }
    out.emplace_back(*v);
  }
  return out;
}

std::vector<int> required_codes(std::string_view field, int lo, int hi, std::size_t line,
                                std::string_view what) {
  std::vector<int> out;
  for (const auto& c : parse_codes(field, lo, hi, false, line, what)) out.push_back(*c);
  return out;
}

double raw_mean(std::span<const int> codes) {
  const double sum = std::accumulate(codes.begin(), codes.end(), 0.0);
  return sum / static_cast<double>(codes.size());
}

}  // namespace

std::vector<AnnotatedExample> parse_corpus(std::istream& in) {
  std::vector<AnnotatedExample> out;
  std::set<std::string> ids;
  read_corpus_rows(in, [&](const Row& row) {
    AnnotatedExample ex;
    ex.id = std::string(detail::trim(row.cols[0]));
    if (ex.id.empty()) throw Error(ErrorCode::ParseError, "empty id", row.line);
    if (!ids.insert(ex.id).second) {
      throw Error(ErrorCode::ParseError, "duplicate id '" + ex.id + "'", row.line);
    }
    ex.subcorpus = detail::to_lower(detail::trim(row.cols[1]));
    ex.text = std::string(row.cols[2]);
    ex.coder_stress = required_codes(row.cols[3], -kMaxStrength, -kMinStrength, row.line, "stress");
    ex.coder_relax = required_codes(row.cols[4], kMinStrength, kMaxStrength, row.line, "relaxation");
    if (ex.coder_stress.size() != ex.coder_relax.size()) {
      throw Error(ErrorCode::ParseError, "stress and relaxation code counts differ", row.line);
    }
    ex.gold_stress_raw = raw_mean(ex.coder_stress);
    ex.gold_relax_raw = raw_mean(ex.coder_relax);
    ex.gold_stress = round_mean_half_away(ex.coder_stress);
    ex.gold_relax = round_mean_half_away(ex.coder_relax);
    out.push_back(std::move(ex));
  });
  return out;
}

std::vector<AnnotatedExample> load_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingResource, "cannot open corpus " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::span<const AnnotatedExample> corpus, std::ostream& out) {
  const auto join = [](const std::vector<int>& codes) {
    std::string s;
    for (int c : codes) {
      if (!s.empty()) s += ',';
      s += std::to_string(c);
    }
    return s;
  };
  out << kCorpusHeader << '\n';
  for (const auto& ex : corpus) {
    out << ex.id << '\t' << ex.subcorpus << '\t' << ex.text << '\t' << join(ex.coder_stress) << '\t'
        << join(ex.coder_relax) << '\n';
  }
}

Slice slice(std::span<const AnnotatedExample> corpus, std::string_view label) {
  Slice out;
  const auto wanted = detail::to_lower(label);
  for (const auto& ex : corpus) {
    if (ex.subcorpus == wanted) out.examples.push_back(ex);
  }
  out.label_known = !out.examples.empty();
  return out;
}

CoderCodes parse_coder_codes(std::istream& in) {
  CoderCodes out;
  out.stress.min_code = -kMaxStrength;
  out.stress.max_code = -kMinStrength;
  out.relaxation.min_code = kMinStrength;
  out.relaxation.max_code = kMaxStrength;
  std::optional<std::size_t> coders;
  read_corpus_rows(in, [&](const Row& row) {
    auto stress = parse_codes(row.cols[3], -kMaxStrength, -kMinStrength, true, row.line, "stress");
    auto relax = parse_codes(row.cols[4], kMinStrength, kMaxStrength, true, row.line, "relaxation");
    if (stress.size() != relax.size()) {
      throw Error(ErrorCode::ParseError, "stress and relaxation code counts differ", row.line);
    }
    if (coders && *coders != stress.size()) {
      throw Error(ErrorCode::ParseError,
                  "expected " + std::to_string(*coders) + " coders, found " +
                      std::to_string(stress.size()),
                  row.line);
    }
    coders = stress.size();
    out.ids.emplace_back(detail::trim(row.cols[0]));
    out.stress.cells.push_back(std::move(stress));
    out.relaxation.cells.push_back(std::move(relax));
  });
  return out;
}

CoderCodes load_coder_codes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingResource, "cannot open " + path.string());
  return parse_coder_codes(in);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::fold_sizes(std::size_t rep) const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto f : assignment.at(rep)) ++sizes.at(f);
  return sizes;
}

std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep) {
  return rng::derive_seed(base_seed, rep);
}

FoldPlan make_folds(std::size_t corpus_size, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::RangeError, "k must be at least 2");
  if (corpus_size < k) {
    throw Error(ErrorCode::TooSmall, "corpus of " + std::to_string(corpus_size) +
                                         " examples is smaller than k=" + std::to_string(k));
  }
  std::vector<std::size_t> order(corpus_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::Engine engine(seed);
  rng::shuffle(std::span<std::size_t>(order), engine);

  FoldPlan plan;
  plan.k = k;
  plan.seeds.push_back(seed);
  auto& assignment = plan.assignment.emplace_back(corpus_size);
  for (std::size_t i = 0; i < corpus_size; ++i) assignment[order[i]] = i % k;
  return plan;
}

FoldPlan make_fold_plan(std::size_t corpus_size, std::size_t k, std::size_t reps,
                        std::uint64_t base_seed) {
  FoldPlan plan;
  plan.k = k;
  for (std::size_t r = 0; r < reps; ++r) {
    auto one = make_folds(corpus_size, k, repetition_seed(base_seed, r));
    plan.seeds.push_back(one.seeds.front());
    plan.assignment.push_back(std::move(one.assignment.front()));
  }
  return plan;
}

// ---------------------------------------------------------------------------

namespace {

struct ScalePairs {
  std::vector<double> predicted;
  std::vector<double> gold;          // rounded or raw, per config
  std::vector<double> gold_rounded;  // for exact / within-1

  void add(int p, double g, int rounded) {
    predicted.push_back(p);
    gold.push_back(g);
    gold_rounded.push_back(rounded);
  }
  MetricsReport report() const {
    return evaluate(PairedSeries(predicted, gold), &gold_rounded);
  }
};

struct PairsBoth {
  ScalePairs stress;
  ScalePairs relax;

  void add(const DualScore& p, const AnnotatedExample& ex, bool unrounded) {
    stress.add(p.stress, unrounded ? ex.gold_stress_raw : ex.gold_stress, ex.gold_stress);
    relax.add(p.relaxation, unrounded ? ex.gold_relax_raw : ex.gold_relax, ex.gold_relax);
  }
};

void accumulate(AveragedMetrics& avg, const MetricsReport& r) {
  ++avg.reps;
  avg.n = r.n;
  avg.exact_pct += r.exact_pct;
  avg.within1_pct += r.within1_pct;
  avg.mad += r.mad;
  if (r.pearson) {
    avg.pearson = avg.pearson.value_or(0.0) + *r.pearson;
  } else {
    ++avg.pearson_skipped;
  }
}

void finish(AveragedMetrics& avg) {
  if (avg.reps == 0) return;
  const auto reps = static_cast<double>(avg.reps);
  avg.exact_pct /= reps;
  avg.within1_pct /= reps;
  avg.mad /= reps;
  if (avg.pearson) *avg.pearson /= static_cast<double>(avg.reps - avg.pearson_skipped);
}

}  // namespace

ScaleReports evaluate_lexicon(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                              bool unrounded) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  const Scorer scorer(lex);
  PairsBoth pairs;
  for (const auto& ex : corpus) pairs.add(scorer.score_text(ex.text).score, ex, unrounded);
  return {pairs.stress.report(), pairs.relax.report()};
}

MetricsReport AveragedMetrics::as_report() const {
  return {n, exact_pct, within1_pct, pearson, mad};
}

CrossValResult crossval(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                        const CrossValConfig& cfg,
                        const std::function<void(const FoldRun&)>& observer) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  if (cfg.reps < 1) throw Error(ErrorCode::RangeError, "reps must be at least 1");
  if (cfg.supervised) cfg.optimizer.validate();

  const Scorer scorer(lex);
  const auto prepared = prepare_corpus(scorer, corpus);
  const auto plan = make_fold_plan(corpus.size(), cfg.k, cfg.reps, cfg.base_seed);

  CrossValResult result;
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    const auto& assignment = plan.assignment[rep];
    PairsBoth pooled;
    for (std::size_t fold = 0; fold < cfg.k; ++fold) {
      FoldRun run{rep, fold, {}, {}, std::nullopt};
      std::vector<const PreparedExample*> train;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (assignment[i] == fold) {
          test.push_back(i);
          if (observer) run.test_ids.push_back(corpus[i].id);
        } else {
          train.push_back(&prepared[i]);
          if (observer) run.train_ids.push_back(corpus[i].id);
        }
      }

      const LexiconSet* model = &lex;
      std::optional<OptimizationResult> optimized;
      if (cfg.supervised) {
        OptimizerConfig fold_cfg = cfg.optimizer;
        fold_cfg.seed = rng::derive_seed(plan.seeds[rep], 0x1000 + fold);
        optimized = hill_climb(lex, std::span<const PreparedExample* const>(train), fold_cfg);
        model = &optimized->lexicon;
        run.optimization = optimized->report;
      }

      PairsBoth fold_pairs;
      for (auto i : test) {
        const auto predicted = Scorer::evaluate(prepared[i].plan, *model);
        fold_pairs.add(predicted, corpus[i], cfg.unrounded);
        pooled.add(predicted, corpus[i], cfg.unrounded);
      }
      result.log.push_back({rep, fold, Scale::Stress, fold_pairs.stress.report()});
      result.log.push_back({rep, fold, Scale::Relaxation, fold_pairs.relax.report()});

      if (observer) observer(run);
    }
    const auto stress = pooled.stress.report();
    const auto relax = pooled.relax.report();
    result.log.push_back({rep, std::nullopt, Scale::Stress, stress});
    result.log.push_back({rep, std::nullopt, Scale::Relaxation, relax});
    accumulate(result.stress, stress);
    accumulate(result.relaxation, relax);
  }
  finish(result.stress);
  finish(result.relaxation);
  return result;
}

void write_crossval_log(const CrossValResult& result, std::ostream& out) {
  out << "rep\tfold\tscale\t" << metrics_tsv_header() << '\n';
  for (const auto& row : result.log) {
    out << row.rep << '\t' << (row.fold ? std::to_string(*row.fold) : std::string("all")) << '\t'
        << to_string(row.scale) << '\t' << to_tsv_row(row.metrics) << '\n';
  }
}

}  // namespace tensilex
