#include "tensilex/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include "tensilex/error.hpp"
#include "text_util.hpp"

namespace tensilex {

namespace fs = std::filesystem;

std::string_view to_string(AffectKind kind) noexcept {
  return kind == AffectKind::Stress ? "stress" : "relax";
}

std::string_view to_string(PhraseKind kind) noexcept {
  switch (kind) {
    case PhraseKind::Stress: return "stress";
    case PhraseKind::Relaxation: return "relax";
    case PhraseKind::Neutral: return "neutral";
  }
  return "neutral";
}

std::string IdiomEntry::phrase() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RecognisedWords

RecognisedWords::RecognisedWords(std::set<std::string> words, std::set<std::string> stems)
    : words_(words.begin(), words.end()), stems_(stems.begin(), stems.end()) {
  for (const auto& s : stems_) max_stem_ = std::max(max_stem_, s.size());
}

bool RecognisedWords::contains(std::string_view word) const {
  if (words_.find(word) != words_.end()) return true;
  const std::size_t longest = std::min(max_stem_, word.size());
  for (std::size_t len = longest; len > 0; --len) {
    if (stems_.find(word.substr(0, len)) != stems_.end()) return true;
  }
  return false;
}

RecognisedWords LexiconSet::recognised_words() const {
  std::set<std::string> words = dictionary;
  std::set<std::string> stems;
  for (const auto* list : {&stress_terms, &relax_terms}) {
    for (const auto& e : *list) {
      if (e.is_wildcard()) {
        stems.emplace(e.stem());
      } else {
        words.insert(e.pattern);
      }
    }
  }
  for (const auto& b : boosters) words.insert(b.word);
  words.insert(negators.begin(), negators.end());
  for (const auto& idiom : idioms) words.insert(idiom.tokens.begin(), idiom.tokens.end());
  return RecognisedWords(std::move(words), std::move(stems));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool strength_in_range(int s) noexcept { return s >= kMinStrength && s <= kMaxStrength; }

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return detail::is_space(c); });
}

// Empty string when valid, otherwise the reason.
std::string pattern_problem(std::string_view pattern) {
  if (pattern.empty()) return "empty pattern";
  if (has_whitespace(pattern)) return "pattern contains whitespace";
  const auto star = pattern.find(kWildcard);
  if (star != std::string_view::npos && star != pattern.size() - 1) {
    return "wildcard '*' is only allowed once, at the end of a pattern";
  }
  if (pattern == "*") return "wildcard pattern has an empty stem";
  if (detail::to_lower(pattern) != pattern) return "pattern must be lowercase";
  return {};
}

void check_terms(const std::vector<LexiconEntry>& terms, AffectKind kind) {
  std::set<std::string_view> seen;
  for (const auto& e : terms) {
    if (auto why = pattern_problem(e.pattern); !why.empty()) {
      throw Error(ErrorCode::ParseError, why + ": '" + e.pattern + "'");
    }
    if (e.kind != kind) {
      throw Error(ErrorCode::ParseError, "term '" + e.pattern + "' is in the wrong list");
    }
    if (!strength_in_range(e.strength)) {
      throw Error(ErrorCode::RangeError, "strength out of range for '" + e.pattern + "'");
    }
    if (!seen.insert(e.pattern).second) {
      throw Error(ErrorCode::DuplicateTerm, "duplicate term '" + e.pattern + "'");
    }
  }
}

template <typename T, typename Key>
std::vector<const T*> sorted_view(const std::vector<T>& items, Key key) {
  std::vector<const T*> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(&item);
  std::stable_sort(out.begin(), out.end(),
                   [&](const T* a, const T* b) { return key(*a) < key(*b); });
  return out;
}

template <typename T, typename Key>
bool equal_unordered(const std::vector<T>& a, const std::vector<T>& b, Key key) {
  if (a.size() != b.size()) return false;
  const auto va = sorted_view(a, key);
  const auto vb = sorted_view(b, key);
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (!(*va[i] == *vb[i])) return false;
  }
  return true;
}

const auto by_pattern = [](const LexiconEntry& e) -> const std::string& { return e.pattern; };
const auto by_word = [](const BoosterEntry& b) -> const std::string& { return b.word; };
const auto by_phrase = [](const IdiomEntry& i) { return i.tokens; };
const auto by_glyph = [](const EmoticonEntry& e) -> const std::string& { return e.glyph; };

}  // namespace

void LexiconSet::validate() const {
  check_terms(stress_terms, AffectKind::Stress);
  check_terms(relax_terms, AffectKind::Relaxation);
  for (const auto& b : boosters) {
    if (b.word.empty() || has_whitespace(b.word)) {
      throw Error(ErrorCode::ParseError, "invalid booster word '" + b.word + "'");
    }
    if (b.delta == 0 || b.delta < -2 || b.delta > 2) {
      throw Error(ErrorCode::RangeError, "booster delta must be in {-2,-1,1,2}: '" + b.word + "'");
    }
  }
  for (const auto& idiom : idioms) {
    if (idiom.tokens.size() < 2) {
      throw Error(ErrorCode::ParseError, "idiom needs at least two tokens: '" + idiom.phrase() + "'");
    }
    if (!strength_in_range(idiom.strength)) {
      throw Error(ErrorCode::RangeError, "idiom strength out of range: '" + idiom.phrase() + "'");
    }
  }
  for (const auto& emo : emoticons) {
    if (emo.glyph.empty()) throw Error(ErrorCode::ParseError, "empty emoticon glyph");
    if (!strength_in_range(emo.strength)) {
      throw Error(ErrorCode::RangeError, "emoticon strength out of range: '" + emo.glyph + "'");
    }
  }
  for (const auto* list : {&stress_terms, &relax_terms}) {
    for (const auto& e : *list) {
      if (!e.is_wildcard() && dictionary.count(e.pattern) == 0) {
        throw Error(ErrorCode::ParseError, "dictionary is missing term '" + e.pattern + "'");
      }
    }
  }
}

bool operator==(const LexiconSet& a, const LexiconSet& b) {
  return a.negators == b.negators && a.dictionary == b.dictionary &&
         equal_unordered(a.stress_terms, b.stress_terms, by_pattern) &&
         equal_unordered(a.relax_terms, b.relax_terms, by_pattern) &&
         equal_unordered(a.boosters, b.boosters, by_word) &&
         equal_unordered(a.idioms, b.idioms, by_phrase) &&
         equal_unordered(a.emoticons, b.emoticons, by_glyph);
}

// ---------------------------------------------------------------------------
// Loading

namespace {

struct DataLine {
  std::size_t number;
  std::string text;
};

std::vector<DataLine> read_data_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingResource, "cannot open " + path.string());
  std::vector<DataLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    detail::strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    if (detail::trim(line).empty()) continue;
    out.push_back({number, line});
  }
  return out;
}

std::vector<std::string_view> columns(const DataLine& line, std::size_t expected,
                                      const fs::path& file) {
  auto cols = detail::split(line.text, '\t');
  if (cols.size() != expected) {
    throw Error(ErrorCode::ParseError,
                file.filename().string() + ": expected " + std::to_string(expected) +
                    " tab-separated columns, found " + std::to_string(cols.size()),
                line.number);
  }
  return cols;
}

int parse_strength(std::string_view field, const DataLine& line, const fs::path& file) {
  const auto value = detail::parse_int(field);
  if (!value || !strength_in_range(*value)) {
    throw Error(ErrorCode::ParseError,
                file.filename().string() + ": strength must be an integer 1..5, got '" +
                    std::string(field) + "'",
                line.number);
  }
  return *value;
}

PhraseKind parse_phrase_kind(std::string_view field, const DataLine& line, const fs::path& file) {
  const auto k = detail::to_lower(detail::trim(field));
  if (k == "stress") return PhraseKind::Stress;
  if (k == "relax" || k == "relaxation") return PhraseKind::Relaxation;
  if (k == "neutral") return PhraseKind::Neutral;
  throw Error(ErrorCode::ParseError,
              file.filename().string() + ": kind must be stress, relax or neutral, got '" +
                  std::string(field) + "'",
              line.number);
}

std::vector<LexiconEntry> load_terms(const fs::path& file, AffectKind kind) {
  std::vector<LexiconEntry> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& line : read_data_lines(file)) {
    const auto cols = columns(line, 2, file);
    auto pattern = detail::to_lower(detail::trim(cols[0]));
    if (auto why = pattern_problem(pattern); !why.empty()) {
      throw Error(ErrorCode::ParseError, file.filename().string() + ": " + why, line.number);
    }
    const int strength = parse_strength(cols[1], line, file);
    if (auto [it, inserted] = seen.emplace(pattern, line.number); !inserted) {
      throw Error(ErrorCode::DuplicateTerm,
                  file.filename().string() + ": duplicate pattern '" + pattern +
                      "' (first seen on line " + std::to_string(it->second) + ")",
                  line.number);
    }
    out.push_back({std::move(pattern), kind, strength});
  }
  return out;
}

std::vector<BoosterEntry> load_boosters(const fs::path& file) {
  std::vector<BoosterEntry> out;
  std::set<std::string> seen;
  for (const auto& line : read_data_lines(file)) {
    const auto cols = columns(line, 2, file);
    auto word = detail::to_lower(detail::trim(cols[0]));
    const auto delta = detail::parse_int(cols[1]);
    if (word.empty() || has_whitespace(word)) {
      throw Error(ErrorCode::ParseError, "boosters.tsv: invalid word", line.number);
    }
    if (!delta || *delta == 0 || *delta < -2 || *delta > 2) {
      throw Error(ErrorCode::ParseError,
                  "boosters.tsv: delta must be one of -2,-1,+1,+2, got '" + std::string(cols[1]) +
                      "'",
                  line.number);
    }
    if (!seen.insert(word).second) {
      throw Error(ErrorCode::DuplicateTerm, "boosters.tsv: duplicate booster '" + word + "'",
                  line.number);
    }
    out.push_back({std::move(word), *delta});
  }
  return out;
}

std::set<std::string> load_word_list(const fs::path& file) {
  std::set<std::string> out;
  for (const auto& line : read_data_lines(file)) {
    const auto word = detail::trim(line.text);
    if (has_whitespace(word)) {
      throw Error(ErrorCode::ParseError,
                  file.filename().string() + ": expected one word per line", line.number);
    }
    out.insert(detail::to_lower(word));
  }
  return out;
}

std::vector<IdiomEntry> load_idioms(const fs::path& file) {
  std::vector<IdiomEntry> out;
  std::set<std::vector<std::string>> seen;
  for (const auto& line : read_data_lines(file)) {
    const auto cols = columns(line, 3, file);
    IdiomEntry idiom;
    idiom.tokens = detail::split_whitespace(detail::to_lower(cols[0]));
    if (idiom.tokens.size() < 2) {
      throw Error(ErrorCode::ParseError, "idioms.tsv: an idiom needs at least two tokens",
                  line.number);
    }
    idiom.kind = parse_phrase_kind(cols[1], line, file);
    idiom.strength = parse_strength(cols[2], line, file);
    if (!seen.insert(idiom.tokens).second) {
      throw Error(ErrorCode::DuplicateTerm, "idioms.tsv: duplicate idiom '" + idiom.phrase() + "'",
                  line.number);
    }
    out.push_back(std::move(idiom));
  }
  return out;
}

std::vector<EmoticonEntry> load_emoticons(const fs::path& file) {
  std::vector<EmoticonEntry> out;
  std::set<std::string> seen;
  for (const auto& line : read_data_lines(file)) {
    const auto cols = columns(line, 3, file);
    EmoticonEntry emo;
    emo.glyph = std::string(cols[0]);
    if (emo.glyph.empty() || has_whitespace(emo.glyph)) {
      throw Error(ErrorCode::ParseError, "emoticons.tsv: invalid glyph", line.number);
    }
    emo.kind = parse_phrase_kind(cols[1], line, file);
    emo.strength = parse_strength(cols[2], line, file);
    if (!seen.insert(emo.glyph).second) {
      throw Error(ErrorCode::DuplicateTerm, "emoticons.tsv: duplicate glyph '" + emo.glyph + "'",
                  line.number);
    }
    out.push_back(std::move(emo));
  }
  return out;
}

}  // namespace

LexiconSet load_lexicon_set(const fs::path& directory) {
  using namespace lexicon_files;
  const auto at = [&](std::string_view name) { return directory / fs::path(name); };
  for (auto name : {kStress, kRelax, kBoosters, kNegators, kIdioms, kEmoticons, kDictionary}) {
    if (!fs::is_regular_file(at(name))) {
      throw Error(ErrorCode::MissingResource, "lexicon file not found: " + at(name).string());
    }
  }

  LexiconSet set;
  set.stress_terms = load_terms(at(kStress), AffectKind::Stress);
  set.relax_terms = load_terms(at(kRelax), AffectKind::Relaxation);
  set.boosters = load_boosters(at(kBoosters));
  set.negators = load_word_list(at(kNegators));
  set.idioms = load_idioms(at(kIdioms));
  set.emoticons = load_emoticons(at(kEmoticons));
  set.dictionary = load_word_list(at(kDictionary));
  for (const auto* list : {&set.stress_terms, &set.relax_terms}) {
    for (const auto& e : *list) {
      if (!e.is_wildcard()) set.dictionary.insert(e.pattern);
    }
  }
  set.validate();
  return set;
}

// ---------------------------------------------------------------------------
// Saving

namespace {

class FileWriter {
 public:
  explicit FileWriter(fs::path path) : path_(std::move(path)), out_(path_, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::WriteError, "cannot open " + path_.string() + " for writing");
  }

  template <typename... Parts>
  void row(const Parts&... parts) {
    bool first = true;
    ((out_ << (first ? "" : "\t") << parts, first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::WriteError, "failed writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

}  // namespace

void save_lexicon_set(const LexiconSet& set, const fs::path& directory) {
  using namespace lexicon_files;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::WriteError, "cannot create " + directory.string() + ": " + ec.message());
  const auto at = [&](std::string_view name) { return directory / fs::path(name); };

  for (auto [name, kind] : {std::pair{kStress, AffectKind::Stress},
                            std::pair{kRelax, AffectKind::Relaxation}}) {
    FileWriter w(at(name));
    for (const auto* e : sorted_view(set.terms(kind), by_pattern)) w.row(e->pattern, e->strength);
    w.close();
  }
  {
    FileWriter w(at(kBoosters));
    for (const auto* b : sorted_view(set.boosters, by_word)) {
      w.row(b->word, (b->delta > 0 ? "+" : "") + std::to_string(b->delta));
    }
    w.close();
  }
  {
    FileWriter w(at(kNegators));
    for (const auto& n : set.negators) w.row(n);
    w.close();
  }
  {
    FileWriter w(at(kIdioms));
    for (const auto* i : sorted_view(set.idioms, by_phrase)) {
      w.row(i->phrase(), to_string(i->kind), i->strength);
    }
    w.close();
  }
  {
    FileWriter w(at(kEmoticons));
    for (const auto* e : sorted_view(set.emoticons, by_glyph)) {
      w.row(e->glyph, to_string(e->kind), e->strength);
    }
    w.close();
  }
  {
    FileWriter w(at(kDictionary));
    for (const auto& d : set.dictionary) w.row(d);
    w.close();
  }
}

// ---------------------------------------------------------------------------
// Lookup and mutation

std::optional<TermMatch> lookup(std::string_view token, std::span<const LexiconEntry> entries) {
  const LexiconEntry* best = nullptr;
  for (const auto& e : entries) {
    if (!e.is_wildcard()) {
      if (e.pattern == token) return TermMatch{&e, e.strength};
      continue;
    }
    const auto stem = e.stem();
    if (token.substr(0, stem.size()) == stem &&
        (best == nullptr || stem.size() > best->stem().size())) {
      best = &e;
    }
  }
  if (best == nullptr) return std::nullopt;
  return TermMatch{best, best->strength};
}

LexiconSet set_strength(const LexiconSet& set, AffectKind kind, std::string_view pattern,
                        int strength) {
  if (!strength_in_range(strength)) {
    throw Error(ErrorCode::RangeError,
                "strength " + std::to_string(strength) + " is outside 1..5");
  }
  const auto& terms = set.terms(kind);
  const auto it = std::find_if(terms.begin(), terms.end(),
                               [&](const LexiconEntry& e) { return e.pattern == pattern; });
  if (it == terms.end()) {
    throw Error(ErrorCode::UnknownTerm,
                "no " + std::string(to_string(kind)) + " term '" + std::string(pattern) + "'");
  }
  LexiconSet out = set;
  out.terms(kind)[static_cast<std::size_t>(it - terms.begin())].strength = strength;
  return out;
}

TermIndex::TermIndex(std::span<const LexiconEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.is_wildcard()) {
      stems_.emplace(std::string(e.stem()), i);
      max_stem_ = std::max(max_stem_, e.stem().size());
    } else {
      exact_.emplace(e.pattern, i);
    }
  }
}

std::optional<std::size_t> TermIndex::find(std::string_view token) const {
  if (auto it = exact_.find(token); it != exact_.end()) return it->second;
  const std::size_t longest = std::min(max_stem_, token.size());
  for (std::size_t len = longest; len > 0; --len) {
    if (auto it = stems_.find(token.substr(0, len)); it != stems_.end()) return it->second;
  }
  return std::nullopt;
}

}  // namespace tensilex
