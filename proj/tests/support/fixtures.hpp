#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tensilex/annotated.hpp"
#include "tensilex/lexicon.hpp"
#include "tensilex/scorer.hpp"

namespace tensilex::testing {

/// Removes itself on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// Writes the seven lexicon files; omitted ones are written empty.
struct LexiconFiles {
  std::string stress, relax, boosters, negators, idioms, emoticons, dictionary;
};
void write_lexicon_dir(const std::filesystem::path& dir, const LexiconFiles& files);

LexiconEntry term(std::string pattern, AffectKind kind, int strength);

/// delayed:Stress 3, asleep:Relax 4, trust:Relax 2, filthy:Stress 2, negator never.
LexiconSet worked_example_lexicon();

/// A small general-purpose lexicon with boosters, negators, idioms and emoticons.
LexiconSet rich_lexicon();

AnnotatedExample make_example(std::string id, std::string text, DualScore gold,
                              std::string subcorpus = "general");

/// Synthetic setup where every text contains exactly one stress term and one
/// relaxation term drawn from a reference lexicon, among filler words, so the
/// reference lexicon reproduces every gold exactly.
struct SyntheticSetup {
  LexiconSet reference;
  std::vector<AnnotatedExample> corpus;
};
SyntheticSetup make_synthetic(std::size_t texts, std::size_t terms_per_scale, std::uint64_t seed);

/// Every text is the same carrier sentence; odd-numbered texts also carry
/// `marker` at a random position and get stress -4, the rest -1. Carrier
/// words are shared by both classes, so only the marker separates them.
std::vector<AnnotatedExample> injected_token_corpus(std::size_t n, std::string_view marker,
                                                    std::uint64_t seed);

/// Random lowercase word of letters without adjacent repeats.
std::string random_word(std::uint64_t& state, std::size_t min_len = 2, std::size_t max_len = 7);

/// Deterministic 64-bit generator for test data (SplitMix64 step).
std::uint64_t next_random(std::uint64_t& state);
std::uint64_t next_below(std::uint64_t& state, std::uint64_t n);

}  // namespace tensilex::testing
