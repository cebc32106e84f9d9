#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tensilex {

enum class AffectKind { Stress, Relaxation };

/// Affect carried by idioms and emoticons; these may also be explicitly neutral.
enum class PhraseKind { Stress, Relaxation, Neutral };

inline constexpr int kMinStrength = 1;
inline constexpr int kMaxStrength = 5;
inline constexpr char kWildcard = '*';

std::string_view to_string(AffectKind kind) noexcept;
std::string_view to_string(PhraseKind kind) noexcept;

/// A stress or relaxation term. `pattern` is lowercase and may end in a single
/// `*`, which matches any (possibly empty) suffix. Strength is a magnitude in
/// 1..5; the sign is applied when scoring.
struct LexiconEntry {
  std::string pattern;
  AffectKind kind = AffectKind::Stress;
  int strength = kMinStrength;

  bool is_wildcard() const noexcept { return !pattern.empty() && pattern.back() == kWildcard; }
  std::string_view stem() const noexcept {
    return is_wildcard() ? std::string_view(pattern).substr(0, pattern.size() - 1)
                         : std::string_view(pattern);
  }

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct BoosterEntry {
  std::string word;
  int delta = 0;

  friend bool operator==(const BoosterEntry&, const BoosterEntry&) = default;
};

struct IdiomEntry {
  std::vector<std::string> tokens;
  PhraseKind kind = PhraseKind::Neutral;
  int strength = kMinStrength;

  std::string phrase() const;

  friend bool operator==(const IdiomEntry&, const IdiomEntry&) = default;
};

struct EmoticonEntry {
  std::string glyph;
  PhraseKind kind = PhraseKind::Neutral;
  int strength = kMinStrength;

  friend bool operator==(const EmoticonEntry&, const EmoticonEntry&) = default;
};

/// Words accepted as "recognised" by spelling correction: an exact word set
/// plus wildcard stems, where any word starting with a stem is recognised.
class RecognisedWords {
 public:
  RecognisedWords() = default;
  explicit RecognisedWords(std::set<std::string> words, std::set<std::string> stems = {});

  bool contains(std::string_view word) const;
  bool empty() const noexcept { return words_.empty() && stems_.empty(); }

 private:
  std::set<std::string, std::less<>> words_;
  std::set<std::string, std::less<>> stems_;
  std::size_t max_stem_ = 0;
};

/// All lexical resources. Plain value type: copies are independent and the
/// optimizer relies on that to reject changes.
struct LexiconSet {
  std::vector<LexiconEntry> stress_terms;
  std::vector<LexiconEntry> relax_terms;
  std::vector<BoosterEntry> boosters;
  std::set<std::string> negators;
  std::vector<IdiomEntry> idioms;
  std::vector<EmoticonEntry> emoticons;
  std::set<std::string> dictionary;

  const std::vector<LexiconEntry>& terms(AffectKind kind) const noexcept {
    return kind == AffectKind::Stress ? stress_terms : relax_terms;
  }
  std::vector<LexiconEntry>& terms(AffectKind kind) noexcept {
    return kind == AffectKind::Stress ? stress_terms : relax_terms;
  }

  /// Dictionary words, every term pattern (wildcards as stems), booster words,
  /// negators and idiom tokens.
  RecognisedWords recognised_words() const;

  /// Throws Error if any type or set invariant is violated.
  void validate() const;

  /// Compares in canonical order, so insertion order is irrelevant.
  friend bool operator==(const LexiconSet& a, const LexiconSet& b);
};

/// The seven files making up a lexicon directory.
namespace lexicon_files {
inline constexpr std::string_view kStress = "stress_terms.tsv";
inline constexpr std::string_view kRelax = "relax_terms.tsv";
inline constexpr std::string_view kBoosters = "boosters.tsv";
inline constexpr std::string_view kNegators = "negators.txt";
inline constexpr std::string_view kIdioms = "idioms.tsv";
inline constexpr std::string_view kEmoticons = "emoticons.tsv";
inline constexpr std::string_view kDictionary = "dictionary.txt";
}  // namespace lexicon_files

/// Loads and validates a lexicon directory. Non-wildcard term patterns are
/// added to the dictionary so the set always satisfies its invariants.
LexiconSet load_lexicon_set(const std::filesystem::path& directory);

/// Writes all seven files with entries in canonical (sorted) order.
void save_lexicon_set(const LexiconSet& set, const std::filesystem::path& directory);

struct TermMatch {
  const LexiconEntry* entry = nullptr;
  int strength = 0;
};

/// Exact pattern beats wildcard; among wildcards the longest stem wins.
std::optional<TermMatch> lookup(std::string_view token, std::span<const LexiconEntry> entries);

LexiconSet set_strength(const LexiconSet& set, AffectKind kind, std::string_view pattern,
                        int strength);

/// Hash index over one term list resolving tokens to entry positions with the
/// same precedence rules as `lookup`. Positions stay valid across strength
/// changes because those never reorder entries.
class TermIndex {
 public:
  TermIndex() = default;
  explicit TermIndex(std::span<const LexiconEntry> entries);

  std::optional<std::size_t> find(std::string_view token) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> exact_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> stems_;
  std::size_t max_stem_ = 0;
};

}  // namespace tensilex
