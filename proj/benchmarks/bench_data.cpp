#include "bench_data.hpp"

#include <algorithm>

#include "tensilex/scorer.hpp"

namespace bench {

const tensilex::LexiconSet& shipped_lexicon() {
  static const auto lex = tensilex::load_lexicon_set(TENSILEX_LEXICON_DIR);
  return lex;
}

std::vector<std::string> make_texts(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> words = {
      "the",    "train",   "was",   "delayed", "again", "so",    "very",  "stressed", "not",
      "calm",   "relaxed", "bus",   "late",    "home",  "now",   "never", "worried",  "panicking",
      "really", "asleep",  "trust", "coffee",  ":)",    ":(",    "today", "sooo",     "tiiired",
      "on",     "my",      "way",   "chill",   "out",   "at",    "ease",  "#commute", "@someone"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> length(5, 25);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const int len = length(rng);
    for (int w = 0; w < len; ++w) {
      if (!text.empty()) text += rng() % 8 == 0 ? ". " : " ";
      text += words[pick(rng)];
    }
    out.push_back(std::move(text));
  }
  return out;
}

std::vector<tensilex::AnnotatedExample> make_corpus(std::size_t n, std::uint64_t seed) {
  const tensilex::Scorer scorer(shipped_lexicon());
  std::vector<tensilex::AnnotatedExample> out;
  std::size_t i = 0;
  for (auto& text : make_texts(n, seed)) {
    const auto score = scorer.score_text(text).score;
    tensilex::AnnotatedExample ex;
    ex.id = "t" + std::to_string(i++);
    ex.subcorpus = "general";
    ex.gold_stress = score.stress;
    ex.gold_relax = score.relaxation;
    ex.gold_stress_raw = ex.gold_stress;
    ex.gold_relax_raw = ex.gold_relax;
    ex.coder_stress = {ex.gold_stress};
    ex.coder_relax = {ex.gold_relax};
    ex.text = std::move(text);
    out.push_back(std::move(ex));
  }
  return out;
}

tensilex::LexiconSet perturbed_lexicon(std::size_t changes, std::uint64_t seed) {
  auto lex = shipped_lexicon();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < changes; ++i) {
    auto& terms = rng() % 2 ? lex.stress_terms : lex.relax_terms;
    auto& entry = terms[rng() % terms.size()];
    entry.strength = entry.strength == tensilex::kMaxStrength ? entry.strength - 1 : entry.strength + 1;
  }
  return lex;
}

}  // namespace bench
