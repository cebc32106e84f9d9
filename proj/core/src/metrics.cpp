#include "tensilex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tensilex/error.hpp"

namespace tensilex {

PairedSeries::PairedSeries(std::vector<double> p, std::vector<double> g)
    : predictions(std::move(p)), golds(std::move(g)) {
  if (predictions.size() != golds.size()) {
    throw Error(ErrorCode::LengthError, "predictions and golds differ in length");
  }
}

PairedSeries PairedSeries::from_ints(std::span<const int> predictions, std::span<const int> golds) {
  return PairedSeries(std::vector<double>(predictions.begin(), predictions.end()),
                      std::vector<double>(golds.begin(), golds.end()));
}

namespace {

void require_non_empty(const PairedSeries& s) {
  if (s.predictions.size() != s.golds.size()) {
    throw Error(ErrorCode::LengthError, "predictions and golds differ in length");
  }
  if (s.predictions.empty()) throw Error(ErrorCode::EmptySeries, "series is empty");
}

double mean(std::span<const double> v) {
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

double mad(const PairedSeries& s) {
  require_non_empty(s);
  double sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += std::fabs(s.predictions[i] - s.golds[i]);
  return sum / static_cast<double>(s.size());
}

std::optional<double> pearson(const PairedSeries& s) {
  require_non_empty(s);
  if (s.size() < 2) return std::nullopt;
  const double mp = mean(s.predictions);
  const double mg = mean(s.golds);
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = s.predictions[i] - mp;
    const double dy = s.golds[i] - mg;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  // The n-1 factors of the sample covariance and both deviations cancel.
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ExactWithin1 exact_within1(const PairedSeries& s) {
  require_non_empty(s);
  std::size_t exact = 0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = std::fabs(s.predictions[i] - s.golds[i]);
    if (d == 0) ++exact;
    if (d <= 1) ++within;
  }
  const double n = static_cast<double>(s.size());
  return {100.0 * static_cast<double>(exact) / n, 100.0 * static_cast<double>(within) / n};
}

MetricsReport evaluate(const PairedSeries& s, const std::vector<double>* exact_against) {
  MetricsReport r;
  r.n = s.size();
  r.mad = mad(s);
  r.pearson = pearson(s);
  const auto ew = exact_against != nullptr
                      ? exact_within1(PairedSeries(s.predictions, *exact_against))
                      : exact_within1(s);
  r.exact_pct = ew.exact_pct;
  r.within1_pct = ew.within1_pct;
  return r;
}

std::string format_metric(std::optional<double> value) {
  if (!value) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", *value);
  return buf;
}

std::string metrics_tsv_header() { return "n\texact\twithin1\tpearson\tmad"; }

std::string to_tsv_row(const MetricsReport& r) {
  return std::to_string(r.n) + '\t' + format_metric(r.exact_pct) + '\t' +
         format_metric(r.within1_pct) + '\t' + format_metric(r.pearson) + '\t' +
         format_metric(r.mad);
}

std::string to_pretty_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::size_t label_width = 5;
  for (const auto& [label, _] : rows) label_width = std::max(label_width, label.size());
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %6s %9s %9s %8s %7s\n", static_cast<int>(label_width),
                "scale", "n", "exact%", "within1%", "pearson", "mad");
  out << buf;
  for (const auto& [label, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s %6zu %9s %9s %8s %7s\n", static_cast<int>(label_width),
                  label.c_str(), r.n, format_metric(r.exact_pct).c_str(),
                  format_metric(r.within1_pct).c_str(), format_metric(r.pearson).c_str(),
                  format_metric(r.mad).c_str());
    out << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------

CodingMatrix CodingMatrix::pair(std::size_t a, std::size_t b) const {
  CodingMatrix out;
  out.min_code = min_code;
  out.max_code = max_code;
  out.cells.reserve(cells.size());
  for (const auto& row : cells) out.cells.push_back({row.at(a), row.at(b)});
  return out;
}

namespace {

void check_matrix(const CodingMatrix& m) {
  if (m.min_code > m.max_code) throw Error(ErrorCode::RangeError, "empty code range");
  if (m.coders() < 2) throw Error(ErrorCode::InsufficientData, "need at least two coders");
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    if (m.cells[i].size() != m.coders()) {
      throw Error(ErrorCode::LengthError, "ragged coding matrix", i + 1);
    }
    for (const auto& c : m.cells[i]) {
      if (c && (*c < m.min_code || *c > m.max_code)) {
        throw Error(ErrorCode::RangeError, "code " + std::to_string(*c) + " outside scale", i + 1);
      }
    }
  }
}

}  // namespace

double krippendorff_alpha(const CodingMatrix& m, AlphaMetric metric) {
  check_matrix(m);
  const auto values = static_cast<std::size_t>(m.max_code - m.min_code + 1);
  std::vector<double> coincidence(values * values, 0.0);
  std::vector<double> counts(values);
  bool any_pairable = false;

  for (const auto& row : m.cells) {
    std::fill(counts.begin(), counts.end(), 0.0);
    double coded = 0;
    for (const auto& c : row) {
      if (c) {
        counts[static_cast<std::size_t>(*c - m.min_code)] += 1;
        coded += 1;
      }
    }
    if (coded < 2) continue;
    any_pairable = true;
    for (std::size_t c = 0; c < values; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t k = 0; k < values; ++k) {
        const double pairs = c == k ? counts[c] * (counts[c] - 1) : counts[c] * counts[k];
        coincidence[c * values + k] += pairs / (coded - 1);
      }
    }
  }
  if (!any_pairable) throw Error(ErrorCode::InsufficientData, "no item has two or more codes");

  const auto delta = [&](std::size_t c, std::size_t k) {
    const double d = std::fabs(static_cast<double>(c) - static_cast<double>(k));
    return metric == AlphaMetric::Linear ? d : d * d;
  };
  std::vector<double> marginal(values, 0.0);
  double n = 0;
  for (std::size_t c = 0; c < values; ++c) {
    for (std::size_t k = 0; k < values; ++k) marginal[c] += coincidence[c * values + k];
    n += marginal[c];
  }
  double observed = 0;
  double expected = 0;
  for (std::size_t c = 0; c < values; ++c) {
    for (std::size_t k = 0; k < values; ++k) {
      observed += coincidence[c * values + k] * delta(c, k);
      expected += marginal[c] * marginal[k] * delta(c, k);
    }
  }
  if (expected == 0) return 1.0;
  return 1.0 - (n - 1) * observed / expected;
}

double full_agreement_pct(const CodingMatrix& m) {
  check_matrix(m);
  std::size_t complete = 0;
  std::size_t agreed = 0;
  for (const auto& row : m.cells) {
    if (std::any_of(row.begin(), row.end(), [](const auto& c) { return !c.has_value(); })) continue;
    ++complete;
    if (std::all_of(row.begin(), row.end(), [&](const auto& c) { return *c == *row.front(); })) {
      ++agreed;
    }
  }
  if (complete == 0) throw Error(ErrorCode::InsufficientData, "no item was coded by every coder");
  return 100.0 * static_cast<double>(agreed) / static_cast<double>(complete);
}

PairedSeries coder_pair_series(const CodingMatrix& m, std::size_t a, std::size_t b) {
  check_matrix(m);
  PairedSeries s;
  for (const auto& row : m.cells) {
    if (row.at(a) && row.at(b)) {
      s.predictions.push_back(*row[a]);
      s.golds.push_back(*row[b]);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

double CrossTab::diagonal_pct() const {
  double sum = 0;
  for (std::size_t i = 0; i < pct.size(); ++i) sum += pct[i][i];
  return sum;
}

CrossTab cross_tab(std::span<const int> a, std::span<const int> b, int min_code, int max_code) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthError, "cross_tab inputs differ in length");
  if (a.empty()) throw Error(ErrorCode::EmptySeries, "cross_tab inputs are empty");
  if (min_code > max_code) throw Error(ErrorCode::RangeError, "empty code range");
  const auto size = static_cast<std::size_t>(max_code - min_code + 1);
  CrossTab out{min_code, max_code, std::vector<std::vector<double>>(size, std::vector<double>(size))};
  const double unit = 100.0 / static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < min_code || a[i] > max_code || b[i] < min_code || b[i] > max_code) {
      throw Error(ErrorCode::RangeError, "cross_tab value outside code range", i + 1);
    }
    out.pct[static_cast<std::size_t>(a[i] - min_code)][static_cast<std::size_t>(b[i] - min_code)] += unit;
  }
  return out;
}

}  // namespace tensilex
