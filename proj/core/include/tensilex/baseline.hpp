#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tensilex/annotated.hpp"
#include "tensilex/corpus.hpp"
#include "tensilex/scorer.hpp"

namespace tensilex {

/// Sparse n-gram counts keyed by the space-joined n-gram, plus the number of
/// unigrams, bigrams and trigrams in the text.
struct FeatureVector {
  std::map<std::string, int, std::less<>> ngrams;
  int unigrams = 0;
  int bigrams = 0;
  int trigrams = 0;

  int count(std::string_view ngram) const {
    const auto it = ngrams.find(ngram);
    return it == ngrams.end() ? 0 : it->second;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Lowercased tokens (punctuation runs are single terms); bigrams and trigrams
/// never span a sentence boundary.
FeatureVector extract_features(std::string_view text);

struct FeatureTable {
  std::vector<std::string> vocabulary;  // sorted; the position is the feature id
  std::vector<std::size_t> document_frequency;
  std::vector<double> gain;             // bits
  double label_entropy = 0;             // H(Y), bits

  std::size_t id_of(std::string_view ngram) const;  // vocabulary.size() when absent
};

/// Information gain of each n-gram's presence about the label.
FeatureTable information_gain(std::span<const FeatureVector> docs, std::span<const int> labels);

/// Selected n-grams. The three count features are always used in addition.
struct FeatureSubset {
  std::vector<std::string> ngrams;

  friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;
};

/// Top `n` by gain, ties broken by the lexicographically smaller n-gram.
FeatureSubset select_top(const FeatureTable& table, std::size_t n);

enum class ClassifierKind { NaiveBayes, Logistic };

std::string_view to_string(ClassifierKind kind) noexcept;

struct LogisticConfig {
  double l2 = 1e-2;
  double step = 0.1;
  int max_epochs = 500;
  double tolerance = 1e-6;
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  std::vector<int> classes;  // ascending
  FeatureSubset subset;

  // Naive Bayes
  std::vector<double> log_prior;
  std::vector<std::vector<double>> log_likelihood;  // [class][feature]

  // Logistic, one-vs-rest: [class][features..., unigram, bigram, trigram, bias]
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> loss_history;  // [class][epoch]
  double row_norm = 1.0;  // longest feature row, set from the step size

  std::unordered_map<std::string, std::size_t> index;  // rebuilt from subset

  void rebuild_index();
};

/// Naive Bayes: multinomial over the selected n-gram counts with add-one
/// smoothing and frequency priors. Logistic: one-vs-rest L2-regularized
/// logistic regression by full-batch gradient descent over presence features
/// and log counts. Rows are capped in length so the configured step always
/// decreases the loss.
TrainedModel train(ClassifierKind kind, std::span<const FeatureVector> docs,
                   std::span<const int> labels, FeatureSubset subset,
                   const LogisticConfig& cfg = {});

/// Naive Bayes: log joint per class. Logistic: one-vs-rest probabilities.
std::vector<double> class_scores(const TrainedModel& model, const FeatureVector& fv);

/// Naive Bayes posterior over the model's classes.
std::vector<double> posterior(const TrainedModel& model, const FeatureVector& fv);

/// Argmax; ties go to the class nearest the neutral code, then the lower one.
int predict(const TrainedModel& model, const FeatureVector& fv);

void save_model(const TrainedModel& model, std::ostream& out);
TrainedModel load_model(std::istream& in);

// ---------------------------------------------------------------------------

inline constexpr std::size_t kSweepSizes[] = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};

struct BaselineConfig {
  std::vector<ClassifierKind> classifiers{ClassifierKind::NaiveBayes, ClassifierKind::Logistic};
  std::vector<std::size_t> feature_counts{std::begin(kSweepSizes), std::end(kSweepSizes)};
  Scale scale = Scale::Stress;
  std::size_t k = 10;
  std::size_t reps = 30;
  std::uint64_t seed = 0;
  LogisticConfig logistic;
};

struct BaselineCell {
  ClassifierKind classifier = ClassifierKind::NaiveBayes;
  Scale scale = Scale::Stress;
  std::size_t n_features = 0;
  AveragedMetrics metrics;
};

/// Repeated k-fold cross-validation of each classifier at each feature count.
/// Feature selection is redone on every training split.
std::vector<BaselineCell> crossval_baseline(std::span<const AnnotatedExample> corpus,
                                            const BaselineConfig& cfg);

/// One row per cell; `best` lists the metrics on which the row is the best
/// cell for its classifier and scale.
void write_sweep(const std::vector<BaselineCell>& cells, std::ostream& out);

std::vector<int> labels_for(std::span<const AnnotatedExample> corpus, Scale scale);

}  // namespace tensilex
