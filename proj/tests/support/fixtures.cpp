#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "tensilex/scorer.hpp"

namespace tensilex::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = fs::temp_directory_path();
  for (int attempt = 0;; ++attempt) {
    auto candidate = base / ("tensilex-test-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
    if (attempt > 1000) throw std::runtime_error("cannot create temp dir");
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_lexicon_dir(const fs::path& dir, const LexiconFiles& f) {
  fs::create_directories(dir);
  write_text(dir / lexicon_files::kStress, f.stress);
  write_text(dir / lexicon_files::kRelax, f.relax);
  write_text(dir / lexicon_files::kBoosters, f.boosters);
  write_text(dir / lexicon_files::kNegators, f.negators);
  write_text(dir / lexicon_files::kIdioms, f.idioms);
  write_text(dir / lexicon_files::kEmoticons, f.emoticons);
  write_text(dir / lexicon_files::kDictionary, f.dictionary);
}

LexiconEntry term(std::string pattern, AffectKind kind, int strength) {
  return LexiconEntry{std::move(pattern), kind, strength};
}

LexiconSet worked_example_lexicon() {
  LexiconSet lex;
  lex.stress_terms = {term("delayed", AffectKind::Stress, 3), term("filthy", AffectKind::Stress, 2)};
  lex.relax_terms = {term("asleep", AffectKind::Relaxation, 4),
                     term("trust", AffectKind::Relaxation, 2)};
  lex.negators = {"never"};
  lex.dictionary = {"delayed", "filthy", "asleep", "trust"};
  return lex;
}

LexiconSet rich_lexicon() {
  LexiconSet lex;
  lex.stress_terms = {term("delayed", AffectKind::Stress, 3), term("worr*", AffectKind::Stress, 4),
                      term("worried", AffectKind::Stress, 3), term("late", AffectKind::Stress, 2),
                      term("stressed", AffectKind::Stress, 4), term("panic*", AffectKind::Stress, 5)};
  lex.relax_terms = {term("calm", AffectKind::Relaxation, 3),
                     term("relax*", AffectKind::Relaxation, 4),
                     term("trust", AffectKind::Relaxation, 2),
                     term("sleepy", AffectKind::Relaxation, 5)};
  lex.boosters = {{"very", 1}, {"extremely", 2}, {"slightly", -1}};
  lex.negators = {"not", "never", "don't"};
  lex.idioms = {{{"chill", "out"}, PhraseKind::Relaxation, 4},
                {{"on", "edge"}, PhraseKind::Stress, 3},
                {{"not", "bad"}, PhraseKind::Neutral, 1}};
  lex.emoticons = {{":)", PhraseKind::Relaxation, 2},
                   {":(", PhraseKind::Stress, 2},
                   {";)", PhraseKind::Neutral, 1}};
  lex.dictionary = {"delayed", "worried", "late",  "stressed", "calm",  "trust", "sleepy",
                    "hello",   "the",     "train", "is",       "good",  "so"};
  return lex;
}

AnnotatedExample make_example(std::string id, std::string text, DualScore gold,
                              std::string subcorpus) {
  AnnotatedExample ex;
  ex.id = std::move(id);
  ex.subcorpus = std::move(subcorpus);
  ex.text = std::move(text);
  ex.coder_stress = {gold.stress};
  ex.coder_relax = {gold.relaxation};
  ex.gold_stress = gold.stress;
  ex.gold_relax = gold.relaxation;
  ex.gold_stress_raw = gold.stress;
  ex.gold_relax_raw = gold.relaxation;
  return ex;
}

std::uint64_t next_random(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t next_below(std::uint64_t& state, std::uint64_t n) { return next_random(state) % n; }

std::string random_word(std::uint64_t& state, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + next_below(state, max_len - min_len + 1);
  std::string w;
  while (w.size() < len) {
    const char c = static_cast<char>('a' + next_below(state, 26));
    if (!w.empty() && w.back() == c) continue;
    w.push_back(c);
  }
  return w;
}

std::vector<AnnotatedExample> injected_token_corpus(std::size_t n, std::string_view marker,
                                                    std::uint64_t seed) {
  static const std::vector<std::string> carrier = {"we", "are", "on", "the", "way", "home", "now"};
  std::uint64_t state = seed;
  std::vector<AnnotatedExample> corpus;
  for (std::size_t i = 0; i < n; ++i) {
    const bool marked = i % 2 == 1;
    auto words = carrier;
    if (marked) {
      const auto at = static_cast<std::ptrdiff_t>(next_below(state, words.size() + 1));
      words.insert(words.begin() + at, std::string(marker));
    }
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    corpus.push_back(make_example("d" + std::to_string(i), text, {marked ? -4 : -1, 1}));
  }
  return corpus;
}

SyntheticSetup make_synthetic(std::size_t texts, std::size_t terms_per_scale, std::uint64_t seed) {
  std::uint64_t state = seed;
  SyntheticSetup setup;
  auto& lex = setup.reference;
  for (std::size_t i = 0; i < terms_per_scale; ++i) {
    const auto s = "sx" + std::to_string(i);
    const auto r = "rx" + std::to_string(i);
    lex.stress_terms.push_back(term(s, AffectKind::Stress, 1 + static_cast<int>(next_below(state, 5))));
    lex.relax_terms.push_back(term(r, AffectKind::Relaxation, 1 + static_cast<int>(next_below(state, 5))));
    lex.dictionary.insert(s);
    lex.dictionary.insert(r);
  }
  const Scorer scorer(lex);
  for (std::size_t t = 0; t < texts; ++t) {
    std::vector<std::string> words;
    const std::size_t fillers = 3 + next_below(state, 5);
    for (std::size_t w = 0; w < fillers; ++w) words.push_back("fw" + std::to_string(next_below(state, 40)));
    const auto stress = "sx" + std::to_string(t % terms_per_scale);
    const auto relax = "rx" + std::to_string((t * 7 + 3) % terms_per_scale);
    words.insert(words.begin() + static_cast<long>(next_below(state, words.size() + 1)), stress);
    words.insert(words.begin() + static_cast<long>(next_below(state, words.size() + 1)), relax);
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    const auto gold = scorer.score_text(text).score;
    setup.corpus.push_back(make_example("s" + std::to_string(t), text, gold,
                                        t % 3 == 0 ? "transport" : "general"));
  }
  return setup;
}

}  // namespace tensilex::testing
