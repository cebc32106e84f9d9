#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tensilex/lexicon.hpp"
#include "tensilex/textproc.hpp"

namespace tensilex {

inline constexpr int kNeutralStress = -1;
inline constexpr int kNeutralRelaxation = 1;

/// Stress in -5..-1 and relaxation in 1..5.
struct DualScore {
  int stress = kNeutralStress;
  int relaxation = kNeutralRelaxation;

  friend bool operator==(const DualScore&, const DualScore&) = default;
};

enum class Scale { Stress, Relaxation };

enum class ContributionSource { StressTerm, RelaxTerm, Idiom, Emoticon, NegatedRelax, NegatedStress };

std::string_view to_string(Scale scale) noexcept;
std::string_view to_string(ContributionSource source) noexcept;

/// One matched item and the arithmetic that produced its strength.
/// final_strength = clamp(base + booster + repeat, 1, 5), except NegatedStress
/// which is always 1.
struct TermContribution {
  std::size_t token_index = 0;
  ContributionSource source = ContributionSource::StressTerm;
  std::string matched;  // pattern, idiom phrase or glyph
  std::string token;    // raw text of the first matched token
  int base_strength = 1;
  int booster_delta = 0;
  int repeat_boost = 0;
  int final_strength = 1;
  Scale scale = Scale::Stress;

  friend bool operator==(const TermContribution&, const TermContribution&) = default;
};

struct SentenceTrace {
  std::string text;
  std::vector<TermContribution> contributions;
  std::vector<std::string> neutral_matches;  // idioms/emoticons that only mask
  bool has_exclamation = false;
  bool stress_boosted = false;
  bool relax_boosted = false;
  DualScore score;

  friend bool operator==(const SentenceTrace&, const SentenceTrace&) = default;
};

struct ScoreTrace {
  std::vector<SentenceTrace> sentences;
  DualScore score;

  friend bool operator==(const ScoreTrace&, const ScoreTrace&) = default;
};

struct ScoredText {
  DualScore score;
  ScoreTrace trace;
};

/// The strength-independent half of scoring: which lexicon items matched
/// where, and with which modifiers. Depends only on patterns, so it stays valid
/// while term strengths change.
struct PlannedMatch {
  std::size_t token_index = 0;
  ContributionSource source = ContributionSource::StressTerm;  // never a Negated* value
  std::size_t entry = 0;  // index into the term, idiom or emoticon list
  int booster_delta = 0;
  int repeat_boost = 0;
  bool negated = false;
};

struct SentencePlan {
  std::vector<PlannedMatch> matches;
  bool has_exclamation = false;
};

struct TextPlan {
  TokenizedText tokens;
  std::vector<SentencePlan> sentences;
};

/// Rule engine bound to one lexicon. Immutable after construction and safe to
/// share between threads.
class Scorer {
 public:
  explicit Scorer(LexiconSet lexicon);

  const LexiconSet& lexicon() const noexcept { return lexicon_; }
  const RecognisedWords& recognised() const noexcept { return recognised_; }

  SentencePlan plan_sentence(const Sentence& tokens) const;
  TextPlan plan_text(std::string_view text) const;

  ScoredText score_text(std::string_view text) const;
  DualScore score_sentence(const Sentence& tokens, SentenceTrace* trace = nullptr) const;

  /// Evaluates a plan using the strengths in `strengths`, which must have the
  /// same entries in the same order as the lexicon the plan was made with.
  static DualScore evaluate(const SentencePlan& plan, const LexiconSet& strengths,
                            const Sentence* tokens = nullptr, SentenceTrace* trace = nullptr);
  static DualScore evaluate(const TextPlan& plan, const LexiconSet& strengths,
                            ScoreTrace* trace = nullptr);

 private:
  LexiconSet lexicon_;
  RecognisedWords recognised_;
  TermIndex stress_index_;
  TermIndex relax_index_;
  std::unordered_map<std::string, int> boosters_;
  std::unordered_map<std::string, std::size_t> emoticons_;
};

std::pair<DualScore, SentenceTrace> score_sentence(const Sentence& tokens, const LexiconSet& lex);
ScoredText score_text(std::string_view text, const LexiconSet& lex);

/// Recomputes a score from trace arithmetic alone.
DualScore replay(const SentenceTrace& trace);
DualScore replay(const ScoreTrace& trace);

/// Human-readable rendering of a trace, one line per contribution.
std::string render_trace(const ScoreTrace& trace);
std::string explain(std::string_view text, const LexiconSet& lex);

}  // namespace tensilex
