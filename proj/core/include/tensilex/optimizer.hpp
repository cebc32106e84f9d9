#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tensilex/annotated.hpp"
#include "tensilex/lexicon.hpp"
#include "tensilex/scorer.hpp"

namespace tensilex {

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int min_improvement = 2;
  int max_passes = 1000;

  void validate() const;
};

struct TermChange {
  int pass = 0;
  AffectKind kind = AffectKind::Stress;
  std::string pattern;
  int old_strength = 0;
  int new_strength = 0;
  std::int64_t error_before = 0;
  std::int64_t error_after = 0;

  friend bool operator==(const TermChange&, const TermChange&) = default;
};

struct PassSummary {
  int pass = 0;
  std::size_t terms_visited = 0;
  int changes = 0;
  std::int64_t error_after = 0;

  friend bool operator==(const PassSummary&, const PassSummary&) = default;
};

struct OptimizationReport {
  std::uint64_t seed = 0;
  int min_improvement = 2;
  int passes_run = 0;
  int changes_made = 0;
  std::int64_t initial_error = 0;
  std::int64_t final_error = 0;
  bool converged = false;  // last pass made no change
  std::vector<TermChange> changes;
  std::vector<PassSummary> passes;

  friend bool operator==(const OptimizationReport&, const OptimizationReport&) = default;
};

struct OptimizationResult {
  LexiconSet lexicon;
  OptimizationReport report;
};

/// A corpus example already tokenized and matched against a lexicon's
/// patterns, ready for repeated evaluation under changing strengths.
struct PreparedExample {
  TextPlan plan;
  DualScore gold;
};

std::vector<PreparedExample> prepare_corpus(const Scorer& scorer,
                                            std::span<const AnnotatedExample> corpus);

/// |stress error| + |relaxation error| for one prediction.
inline std::int64_t absolute_error(const DualScore& predicted, const DualScore& gold) noexcept {
  const auto d = [](int a, int b) { return static_cast<std::int64_t>(a > b ? a - b : b - a); };
  return d(predicted.stress, gold.stress) + d(predicted.relaxation, gold.relaxation);
}

/// Sum over the corpus of absolute errors on both scales against rounded golds.
std::int64_t total_absolute_error(const LexiconSet& lex, std::span<const AnnotatedExample> corpus);

/// Supervised refinement. Each pass visits every stress and relaxation term in
/// a fresh seeded permutation, tries +1 then -1, and keeps a change only when
/// the total error drops by at least `min_improvement`. Stops after a pass
/// with no change or at `max_passes`.
OptimizationResult hill_climb(const LexiconSet& lex, std::span<const AnnotatedExample> corpus,
                              const OptimizerConfig& cfg);

/// Same climb over prepared examples. `lex` must be the lexicon the examples
/// were prepared with (strengths may differ).
OptimizationResult hill_climb(const LexiconSet& lex,
                              std::span<const PreparedExample* const> corpus,
                              const OptimizerConfig& cfg);

/// Line-oriented TSV log: key/value summary, per-pass rows, then one row per
/// kept change.
void write_report(const OptimizationReport& report, std::ostream& out);

}  // namespace tensilex
