#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensilex/annotated.hpp"
#include "tensilex/lexicon.hpp"
#include "tensilex/metrics.hpp"
#include "tensilex/optimizer.hpp"
#include "tensilex/scorer.hpp"

namespace tensilex {

/// Expected header of a corpus TSV file.
inline constexpr std::string_view kCorpusHeader = "id\tsubcorpus\ttext\tstress_codes\trelax_codes";

/// Mean of integer codes rounded half away from zero, computed exactly.
int round_mean_half_away(std::span<const int> codes);

/// Parses the corpus TSV. Row numbers in errors are physical line numbers.
std::vector<AnnotatedExample> parse_corpus(std::istream& in);
std::vector<AnnotatedExample> load_corpus(const std::filesystem::path& path);

/// Writes a corpus in the same TSV format.
void write_corpus(std::span<const AnnotatedExample> corpus, std::ostream& out);

struct Slice {
  std::vector<AnnotatedExample> examples;
  bool label_known = false;
};

/// Case-insensitive filter on the subcorpus label.
Slice slice(std::span<const AnnotatedExample> corpus, std::string_view label);

/// Per-scale coding matrices read from a corpus-format file. Codes may be
/// `NA` or empty for a missing judgement; every row needs the same coder count.
struct CoderCodes {
  std::vector<std::string> ids;
  CodingMatrix stress;
  CodingMatrix relaxation;
};
CoderCodes parse_coder_codes(std::istream& in);
CoderCodes load_coder_codes(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Folds

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::uint64_t> seeds;                 // one per repetition
  std::vector<std::vector<std::size_t>> assignment; // [rep][example] -> fold

  std::vector<std::size_t> fold_sizes(std::size_t rep) const;
};

/// Seed of repetition `rep` under `base_seed`.
std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t rep);

/// One repetition: seeded shuffle of example positions, then round-robin.
FoldPlan make_folds(std::size_t corpus_size, std::size_t k, std::uint64_t seed);

/// `reps` repetitions with seeds derived from `base_seed`.
FoldPlan make_fold_plan(std::size_t corpus_size, std::size_t k, std::size_t reps,
                        std::uint64_t base_seed);

// ---------------------------------------------------------------------------
// Evaluation

struct ScaleReports {
  MetricsReport stress;
  MetricsReport relaxation;
};

/// Scores every example with `lex` and compares against the golds. With
/// `unrounded`, MAD and Pearson use the raw coder means while exact and
/// within-1 still use the rounded golds.
ScaleReports evaluate_lexicon(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                              bool unrounded = false);

struct CrossValConfig {
  std::size_t k = 10;
  std::size_t reps = 30;
  std::uint64_t base_seed = 0;
  bool supervised = true;
  bool unrounded = false;
  OptimizerConfig optimizer;  // seed is ignored; each fold derives its own
};

/// Mean over repetitions of the repetition-level metrics.
struct AveragedMetrics {
  std::size_t reps = 0;
  std::size_t n = 0;
  double exact_pct = 0;
  double within1_pct = 0;
  std::optional<double> pearson;
  std::size_t pearson_skipped = 0;
  double mad = 0;

  MetricsReport as_report() const;

  friend bool operator==(const AveragedMetrics&, const AveragedMetrics&) = default;
};

struct CrossValLogRow {
  std::size_t rep = 0;
  std::optional<std::size_t> fold;  // nullopt: the whole repetition pooled
  Scale scale = Scale::Stress;
  MetricsReport metrics;
};

struct CrossValResult {
  AveragedMetrics stress;
  AveragedMetrics relaxation;
  std::vector<CrossValLogRow> log;
};

/// What one fold trained on and was tested on, for auditing.
struct FoldRun {
  std::size_t rep = 0;
  std::size_t fold = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::optional<OptimizationReport> optimization;
};

/// k-fold cross-validation repeated `reps` times. In supervised mode each fold
/// hill-climbs a copy of `lex` on the other folds before scoring the held-out
/// fold; otherwise `lex` is used as is.
CrossValResult crossval(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                        const CrossValConfig& cfg,
                        const std::function<void(const FoldRun&)>& observer = {});

/// One row per (rep, fold, scale); pooled repetition rows use fold `all`.
void write_crossval_log(const CrossValResult& result, std::ostream& out);

}  // namespace tensilex
