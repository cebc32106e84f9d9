#include "tensilex/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "tensilex/error.hpp"
#include "tensilex/textproc.hpp"
#include "text_util.hpp"

namespace tensilex {

FeatureVector extract_features(std::string_view text) {
  FeatureVector fv;
  for (const auto& sentence : segment_sentences(text)) {
    const auto tokens = tokenize(sentence);
    const std::size_t n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::string gram = tokens[i].normalized;
      ++fv.ngrams[gram];
      ++fv.unigrams;
      for (std::size_t len = 2; len <= 3 && i + len <= n; ++len) {
        gram += ' ';
        gram += tokens[i + len - 1].normalized;
        ++fv.ngrams[gram];
        ++(len == 2 ? fv.bigrams : fv.trigrams);
      }
    }
  }
  return fv;
}

std::size_t FeatureTable::id_of(std::string_view ngram) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), ngram);
  if (it == vocabulary.end() || *it != ngram) return vocabulary.size();
  return static_cast<std::size_t>(it - vocabulary.begin());
}

namespace {

double entropy_bits(std::span<const double> counts, double total) {
  if (total <= 0) return 0;
  double h = 0;
  for (double c : counts) {
    if (c > 0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

std::vector<int> distinct_sorted(std::span<const int> labels) {
  std::vector<int> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t class_position(const std::vector<int>& classes, int label) {
  return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) -
                                  classes.begin());
}

}  // namespace

FeatureTable information_gain(std::span<const FeatureVector> docs, std::span<const int> labels) {
  if (docs.size() != labels.size()) throw Error(ErrorCode::LengthError, "docs and labels differ in length");
  const auto classes = distinct_sorted(labels);
  if (classes.size() < 2) throw Error(ErrorCode::DegenerateLabels, "need at least two distinct labels");

  std::vector<double> class_totals(classes.size(), 0.0);
  for (int y : labels) class_totals[class_position(classes, y)] += 1;
  const double n = static_cast<double>(docs.size());

  // n-gram -> per-class document counts
  std::map<std::string_view, std::vector<double>> present;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::size_t c = class_position(classes, labels[d]);
    for (const auto& [gram, count] : docs[d].ngrams) {
      if (count <= 0) continue;
      auto& row = present[gram];
      if (row.empty()) row.assign(classes.size(), 0.0);
      row[c] += 1;
    }
  }

  FeatureTable table;
  table.label_entropy = entropy_bits(class_totals, n);
  table.vocabulary.reserve(present.size());
  std::vector<double> absent(classes.size());
  for (const auto& [gram, with] : present) {
    const double df = std::accumulate(with.begin(), with.end(), 0.0);
    for (std::size_t c = 0; c < classes.size(); ++c) absent[c] = class_totals[c] - with[c];
    const double p = df / n;
    const double conditional = p * entropy_bits(with, df) + (1 - p) * entropy_bits(absent, n - df);
    table.vocabulary.emplace_back(gram);
    table.document_frequency.push_back(static_cast<std::size_t>(df));
    table.gain.push_back(std::clamp(table.label_entropy - conditional, 0.0, table.label_entropy));
  }
  return table;
}

FeatureSubset select_top(const FeatureTable& table, std::size_t n) {
  std::vector<std::size_t> ids(table.vocabulary.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  // Vocabulary is sorted, so the lower id is the lexicographically smaller n-gram.
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return table.gain[a] > table.gain[b]; });
  ids.resize(std::min(n, ids.size()));
  FeatureSubset subset;
  subset.ngrams.reserve(ids.size());
  for (auto id : ids) subset.ngrams.push_back(table.vocabulary[id]);
  return subset;
}

std::string_view to_string(ClassifierKind kind) noexcept {
  return kind == ClassifierKind::NaiveBayes ? "nb" : "logistic";
}

void TrainedModel::rebuild_index() {
  index.clear();
  for (std::size_t i = 0; i < subset.ngrams.size(); ++i) index.emplace(subset.ngrams[i], i);
}

namespace {

struct SparseRow {
  std::vector<std::size_t> indices;
  std::vector<double> values;
};

// Presence of each selected n-gram plus log counts. Rows longer than the
// model's row_norm are scaled down to it. The bias is handled separately.
SparseRow logistic_row(const TrainedModel& model, const FeatureVector& fv) {
  SparseRow row;
  for (const auto& [gram, count] : fv.ngrams) {
    if (count <= 0) continue;
    if (const auto it = model.index.find(gram); it != model.index.end()) {
      row.indices.push_back(it->second);
      row.values.push_back(1.0);
    }
  }
  const std::size_t v = model.subset.ngrams.size();
  const int dense[] = {fv.unigrams, fv.bigrams, fv.trigrams};
  for (std::size_t j = 0; j < 3; ++j) {
    if (dense[j] > 0) {
      row.indices.push_back(v + j);
      row.values.push_back(std::log1p(static_cast<double>(dense[j])));
    }
  }
  double norm = 0;
  for (double x : row.values) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > model.row_norm) {
    for (double& x : row.values) x *= model.row_norm / norm;
  }
  return row;
}

double dot(const std::vector<double>& w, const SparseRow& row) {
  double z = w.back();
  for (std::size_t k = 0; k < row.indices.size(); ++k) z += w[row.indices[k]] * row.values[k];
  return z;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void train_naive_bayes(TrainedModel& model, std::span<const FeatureVector> docs,
                       std::span<const int> labels) {
  const std::size_t classes = model.classes.size();
  const std::size_t v = model.subset.ngrams.size();
  std::vector<double> doc_counts(classes, 0.0);
  std::vector<std::vector<double>> counts(classes, std::vector<double>(v, 0.0));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::size_t c = class_position(model.classes, labels[d]);
    doc_counts[c] += 1;
    for (const auto& [gram, count] : docs[d].ngrams) {
      if (const auto it = model.index.find(gram); it != model.index.end()) {
        counts[c][it->second] += count;
      }
    }
  }
  const double n = static_cast<double>(docs.size());
  model.log_prior.resize(classes);
  model.log_likelihood.assign(classes, std::vector<double>(v, 0.0));
  for (std::size_t c = 0; c < classes; ++c) {
    model.log_prior[c] = std::log(doc_counts[c] / n);
    const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0);
    const double denom = std::log(total + static_cast<double>(v));
    for (std::size_t f = 0; f < v; ++f) model.log_likelihood[c][f] = std::log(counts[c][f] + 1) - denom;
  }
}

void train_logistic(TrainedModel& model, std::span<const FeatureVector> docs,
                    std::span<const int> labels, const LogisticConfig& cfg) {
  const std::size_t dims = model.subset.ngrams.size() + 3;
  // Gradient of the mean loss is Lipschitz with L <= (|x|^2 + 1) / 4 + l2,
  // counting the bias. Keeping step * L <= 1 makes every step a descent step.
  const double budget = 4.0 * (1.0 / cfg.step - cfg.l2) - 1.0;
  model.row_norm = budget > 0 ? std::sqrt(budget) : 1.0;
  std::vector<SparseRow> rows;
  rows.reserve(docs.size());
  for (const auto& fv : docs) rows.push_back(logistic_row(model, fv));
  const double n = static_cast<double>(docs.size());

  model.weights.assign(model.classes.size(), std::vector<double>(dims + 1, 0.0));
  model.loss_history.assign(model.classes.size(), {});
  std::vector<double> grad(dims + 1);

  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    auto& w = model.weights[c];
    auto& history = model.loss_history[c];
    const auto loss_and_grad = [&]() {
      double loss = 0;
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = labels[i] == model.classes[c] ? 1.0 : 0.0;
        const double z = dot(w, rows[i]);
        loss += softplus(z) - y * z;
        const double r = sigmoid(z) - y;
        for (std::size_t k = 0; k < rows[i].indices.size(); ++k) {
          grad[rows[i].indices[k]] += r * rows[i].values[k];
        }
        grad[dims] += r;
      }
      loss /= n;
      double penalty = 0;
      for (std::size_t j = 0; j < dims; ++j) penalty += w[j] * w[j];
      loss += 0.5 * cfg.l2 * penalty;
      for (std::size_t j = 0; j <= dims; ++j) grad[j] /= n;
      for (std::size_t j = 0; j < dims; ++j) grad[j] += cfg.l2 * w[j];
      return loss;
    };

    double loss = loss_and_grad();
    history.push_back(loss);
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
      for (std::size_t j = 0; j <= dims; ++j) w[j] -= cfg.step * grad[j];
      const double next = loss_and_grad();
      history.push_back(next);
      const bool done = std::fabs(loss - next) < cfg.tolerance;
      loss = next;
      if (done) break;
    }
  }
}

}  // namespace

TrainedModel train(ClassifierKind kind, std::span<const FeatureVector> docs,
                   std::span<const int> labels, FeatureSubset subset, const LogisticConfig& cfg) {
  if (docs.size() != labels.size()) throw Error(ErrorCode::LengthError, "docs and labels differ in length");
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no training examples");
  TrainedModel model;
  model.kind = kind;
  model.classes = distinct_sorted(labels);
  model.subset = std::move(subset);
  model.rebuild_index();
  if (kind == ClassifierKind::NaiveBayes) {
    train_naive_bayes(model, docs, labels);
  } else {
    train_logistic(model, docs, labels, cfg);
  }
  return model;
}

std::vector<double> class_scores(const TrainedModel& model, const FeatureVector& fv) {
  std::vector<double> scores(model.classes.size());
  if (model.kind == ClassifierKind::NaiveBayes) {
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] = model.log_prior[c];
    for (const auto& [gram, count] : fv.ngrams) {
      const auto it = model.index.find(gram);
      if (it == model.index.end() || count <= 0) continue;
      for (std::size_t c = 0; c < scores.size(); ++c) {
        scores[c] += count * model.log_likelihood[c][it->second];
      }
    }
  } else {
    const auto row = logistic_row(model, fv);
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] = sigmoid(dot(model.weights[c], row));
  }
  return scores;
}

std::vector<double> posterior(const TrainedModel& model, const FeatureVector& fv) {
  auto scores = class_scores(model, fv);
  if (model.kind == ClassifierKind::NaiveBayes) {
    const double top = *std::max_element(scores.begin(), scores.end());
    for (double& s : scores) s = std::exp(s - top);
  }
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  for (double& s : scores) s /= total;
  return scores;
}

int predict(const TrainedModel& model, const FeatureVector& fv) {
  const auto scores = class_scores(model, fv);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best] ||
        (scores[c] == scores[best] && std::abs(model.classes[c]) < std::abs(model.classes[best]))) {
      best = c;
    }
  }
  return model.classes[best];
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kModelMagic = "tensilex-model";
constexpr int kModelVersion = 1;

std::string exact_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_values(std::ostream& out, std::string_view tag, std::size_t row,
                  const std::vector<double>& values) {
  out << tag << '\t' << row;
  for (double v : values) out << '\t' << exact_double(v);
  out << '\n';
}

[[noreturn]] void bad_model(const std::string& why, std::size_t line) {
  throw Error(ErrorCode::ParseError, "model file: " + why, line);
}

double parse_double(std::string_view s, std::size_t line) {
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) bad_model("bad number '" + copy + "'", line);
  return v;
}

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
  out << kModelMagic << '\t' << kModelVersion << '\n';
  out << "kind\t" << to_string(model.kind) << '\n';
  out << "classes";
  for (int c : model.classes) out << '\t' << c;
  out << '\n';
  out << "features\t" << model.subset.ngrams.size() << '\n';
  for (const auto& g : model.subset.ngrams) out << "feature\t" << g << '\n';
  if (model.kind == ClassifierKind::NaiveBayes) {
    write_values(out, "prior", 0, model.log_prior);
    for (std::size_t c = 0; c < model.log_likelihood.size(); ++c) {
      write_values(out, "likelihood", c, model.log_likelihood[c]);
    }
  } else {
    out << "row_norm\t" << exact_double(model.row_norm) << '\n';
    for (std::size_t c = 0; c < model.weights.size(); ++c) write_values(out, "weights", c, model.weights[c]);
  }
  out << "end\n";
}

TrainedModel load_model(std::istream& in) {
  TrainedModel model;
  std::string line;
  std::size_t number = 0;
  bool ended = false;
  std::size_t expected_features = 0;
  while (!ended && std::getline(in, line)) {
    ++number;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto cols = detail::split(line, '\t');
    const auto tag = cols[0];
    if (number == 1) {
      if (tag != kModelMagic || cols.size() != 2 || detail::parse_int(cols[1]) != kModelVersion) {
        bad_model("unsupported header", number);
      }
    } else if (tag == "kind" && cols.size() == 2) {
      if (cols[1] == "nb") {
        model.kind = ClassifierKind::NaiveBayes;
      } else if (cols[1] == "logistic") {
        model.kind = ClassifierKind::Logistic;
      } else {
        bad_model("unknown kind", number);
      }
    } else if (tag == "classes") {
      for (std::size_t i = 1; i < cols.size(); ++i) {
        const auto v = detail::parse_int(cols[i]);
        if (!v) bad_model("bad class", number);
        model.classes.push_back(*v);
      }
    } else if (tag == "features" && cols.size() == 2) {
      const auto v = detail::parse_int(cols[1]);
      if (!v || *v < 0) bad_model("bad feature count", number);
      expected_features = static_cast<std::size_t>(*v);
    } else if (tag == "row_norm" && cols.size() == 2) {
      model.row_norm = parse_double(cols[1], number);
      if (!(model.row_norm > 0)) bad_model("bad row_norm", number);
    } else if (tag == "feature" && cols.size() == 2) {
      model.subset.ngrams.emplace_back(cols[1]);
    } else if (tag == "prior" || tag == "likelihood" || tag == "weights") {
      std::vector<double> values;
      for (std::size_t i = 2; i < cols.size(); ++i) values.push_back(parse_double(cols[i], number));
      if (tag == "prior") {
        model.log_prior = std::move(values);
      } else if (tag == "likelihood") {
        model.log_likelihood.push_back(std::move(values));
      } else {
        model.weights.push_back(std::move(values));
      }
    } else if (tag == "end") {
      ended = true;
    } else {
      bad_model("unexpected line", number);
    }
  }
  if (number == 0) bad_model("empty file", 1);
  if (!ended) bad_model("missing end marker", number);
  if (model.subset.ngrams.size() != expected_features) bad_model("feature count mismatch", number);
  const std::size_t classes = model.classes.size();
  const std::size_t v = expected_features;
  const bool shapes_ok =
      model.kind == ClassifierKind::NaiveBayes
          ? model.log_prior.size() == classes && model.log_likelihood.size() == classes &&
                std::all_of(model.log_likelihood.begin(), model.log_likelihood.end(),
                            [&](const auto& r) { return r.size() == v; })
          : model.weights.size() == classes &&
                std::all_of(model.weights.begin(), model.weights.end(),
                            [&](const auto& r) { return r.size() == v + 4; });
  if (classes == 0 || !shapes_ok) bad_model("parameter shapes do not match", number);
  model.rebuild_index();
  return model;
}

// ---------------------------------------------------------------------------
// Cross-validated sweep

std::vector<int> labels_for(std::span<const AnnotatedExample> corpus, Scale scale) {
  std::vector<int> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) out.push_back(scale == Scale::Stress ? ex.gold_stress : ex.gold_relax);
  return out;
}

std::vector<BaselineCell> crossval_baseline(std::span<const AnnotatedExample> corpus,
                                            const BaselineConfig& cfg) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  if (cfg.reps < 1) throw Error(ErrorCode::RangeError, "reps must be at least 1");
  std::vector<FeatureVector> features;
  features.reserve(corpus.size());
  for (const auto& ex : corpus) features.push_back(extract_features(ex.text));
  const auto labels = labels_for(corpus, cfg.scale);
  const auto plan = make_fold_plan(corpus.size(), cfg.k, cfg.reps, cfg.seed);

  const std::size_t cells = cfg.classifiers.size() * cfg.feature_counts.size();
  std::vector<AveragedMetrics> averages(cells);

  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    std::vector<std::vector<double>> predicted(cells, std::vector<double>(corpus.size()));
    for (std::size_t fold = 0; fold < cfg.k; ++fold) {
      std::vector<FeatureVector> train_x;
      std::vector<int> train_y;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (plan.assignment[rep][i] == fold) {
          test.push_back(i);
        } else {
          train_x.push_back(features[i]);
          train_y.push_back(labels[i]);
        }
      }
      // A single-class training split cannot be ranked; the models then use no n-grams.
      const bool ranked = distinct_sorted(train_y).size() >= 2;
      const FeatureTable table = ranked ? information_gain(train_x, train_y) : FeatureTable{};
      for (std::size_t ci = 0; ci < cfg.classifiers.size(); ++ci) {
        for (std::size_t ni = 0; ni < cfg.feature_counts.size(); ++ni) {
          FeatureSubset subset = select_top(table, cfg.feature_counts[ni]);
          const auto model = train(cfg.classifiers[ci], train_x, train_y, std::move(subset), cfg.logistic);
          auto& out = predicted[ci * cfg.feature_counts.size() + ni];
          for (auto i : test) out[i] = predict(model, features[i]);
        }
      }
    }
    const std::vector<double> gold(labels.begin(), labels.end());
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const auto r = evaluate(PairedSeries(predicted[cell], gold));
      auto& avg = averages[cell];
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
  }

  std::vector<BaselineCell> out;
  for (std::size_t ci = 0; ci < cfg.classifiers.size(); ++ci) {
    for (std::size_t ni = 0; ni < cfg.feature_counts.size(); ++ni) {
      auto avg = averages[ci * cfg.feature_counts.size() + ni];
      const auto reps = static_cast<double>(avg.reps);
      avg.exact_pct /= reps;
      avg.within1_pct /= reps;
      avg.mad /= reps;
      if (avg.pearson) *avg.pearson /= static_cast<double>(avg.reps - avg.pearson_skipped);
      out.push_back({cfg.classifiers[ci], cfg.scale, cfg.feature_counts[ni], avg});
    }
  }
  return out;
}

void write_sweep(const std::vector<BaselineCell>& cells, std::ostream& out) {
  out << "classifier\tscale\tn_features\t" << metrics_tsv_header() << "\tbest\n";
  for (const auto& cell : cells) {
    std::vector<const BaselineCell*> group;
    for (const auto& other : cells) {
      if (other.classifier == cell.classifier && other.scale == cell.scale) group.push_back(&other);
    }
    const auto best_by = [&](auto better) {
      const BaselineCell* best = group.front();
      for (const auto* g : group) {
        if (better(*g, *best)) best = g;
      }
      return best == &cell;
    };
    std::string best;
    const auto mark = [&](bool is_best, std::string_view name) {
      if (!is_best) return;
      if (!best.empty()) best += ',';
      best += name;
    };
    mark(best_by([](const auto& a, const auto& b) { return a.metrics.exact_pct > b.metrics.exact_pct; }), "exact");
    mark(best_by([](const auto& a, const auto& b) { return a.metrics.within1_pct > b.metrics.within1_pct; }),
         "within1");
    mark(best_by([](const auto& a, const auto& b) {
           return a.metrics.pearson && (!b.metrics.pearson || *a.metrics.pearson > *b.metrics.pearson);
         }),
         "pearson");
    mark(best_by([](const auto& a, const auto& b) { return a.metrics.mad < b.metrics.mad; }), "mad");
    out << to_string(cell.classifier) << '\t' << to_string(cell.scale) << '\t' << cell.n_features << '\t'
        << to_tsv_row(cell.metrics.as_report()) << '\t' << (best.empty() ? "-" : best) << '\n';
  }
}

}  // namespace tensilex
