#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tensilex {

/// Predictions against golds on one scale. Values are doubles so unrounded
/// gold means can be compared too; integer codes convert exactly.
struct PairedSeries {
  std::vector<double> predictions;
  std::vector<double> golds;

  PairedSeries() = default;
  PairedSeries(std::vector<double> p, std::vector<double> g);
  static PairedSeries from_ints(std::span<const int> predictions, std::span<const int> golds);

  std::size_t size() const noexcept { return predictions.size(); }
};

double mad(const PairedSeries& s);

/// Sample Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(const PairedSeries& s);

struct ExactWithin1 {
  double exact_pct = 0;
  double within1_pct = 0;
};
ExactWithin1 exact_within1(const PairedSeries& s);

struct MetricsReport {
  std::size_t n = 0;
  double exact_pct = 0;
  double within1_pct = 0;
  std::optional<double> pearson;
  double mad = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// All four statistics. `exact_against`, when given, replaces the golds for the
/// exact and within-1 percentages (used to score unrounded golds).
MetricsReport evaluate(const PairedSeries& s, const std::vector<double>* exact_against = nullptr);

/// Fixed three-decimal rendering used in every table ("NA" for undefined).
std::string format_metric(std::optional<double> value);

std::string metrics_tsv_header();
/// n, exact, within1, pearson, mad.
std::string to_tsv_row(const MetricsReport& report);
std::string to_pretty_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);

// ---------------------------------------------------------------------------
// Inter-coder agreement

/// Items by coders; std::nullopt marks a missing code.
struct CodingMatrix {
  std::vector<std::vector<std::optional<int>>> cells;
  int min_code = 1;
  int max_code = 5;

  std::size_t items() const noexcept { return cells.size(); }
  std::size_t coders() const noexcept { return cells.empty() ? 0 : cells.front().size(); }

  /// The two-coder submatrix for coders a and b.
  CodingMatrix pair(std::size_t a, std::size_t b) const;
};

enum class AlphaMetric {
  Linear,    // delta(c, k) = |c - k|
  Interval,  // delta(c, k) = (c - k)^2
};

/// Krippendorff's alpha from the coincidence matrix. Items with fewer than two
/// codes are skipped. Defined as 1 when every pairable code is identical.
double krippendorff_alpha(const CodingMatrix& m, AlphaMetric metric = AlphaMetric::Linear);

/// Percentage of items (coded by every coder) on which all coders agree.
double full_agreement_pct(const CodingMatrix& m);

/// Coders a and b over items both coded, as a paired series (a as prediction).
PairedSeries coder_pair_series(const CodingMatrix& m, std::size_t a, std::size_t b);

// ---------------------------------------------------------------------------
// Cross-tabulation

struct CrossTab {
  int min_code = 1;
  int max_code = 5;
  std::vector<std::vector<double>> pct;  // [a - min][b - min]

  double at(int a, int b) const { return pct.at(a - min_code).at(b - min_code); }
  double diagonal_pct() const;
};

CrossTab cross_tab(std::span<const int> a, std::span<const int> b, int min_code, int max_code);

}  // namespace tensilex
