#include "tensilex/textproc.hpp"

#include <cctype>

#include "text_util.hpp"

namespace tensilex {

std::size_t TokenizedText::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

namespace {

bool is_terminator(char c) noexcept { return c == '.' || c == '!' || c == '?'; }

bool is_word_char(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0 || c == '_';
}

bool is_ascii_letter(char c) noexcept { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool starts_with(std::string_view s, std::string_view prefix) noexcept {
  return s.substr(0, prefix.size()) == prefix;
}

bool is_url_chunk(std::string_view chunk) {
  const auto lower = detail::to_lower(chunk);
  return starts_with(lower, "http://") || starts_with(lower, "https://") ||
         starts_with(lower, "www.");
}

bool word_at(std::string_view chunk, std::size_t i) noexcept {
  return i < chunk.size() && is_word_char(chunk[i]);
}

// A `#` or `@` directly followed by a word character opens a hashtag/mention.
bool tag_opens_at(std::string_view chunk, std::size_t i) noexcept {
  return i < chunk.size() && (chunk[i] == '#' || chunk[i] == '@') && word_at(chunk, i + 1);
}

// Apostrophes and hyphens joining two word characters are part of the word.
bool is_joiner_at(std::string_view chunk, std::size_t i) noexcept {
  return i > 0 && (chunk[i] == '\'' || chunk[i] == '-') && word_at(chunk, i - 1) &&
         word_at(chunk, i + 1);
}

// Letter mouths such as ":D" or ";p" stay attached to their punctuation eyes.
bool emoticon_mouth_at(std::string_view chunk, std::size_t start, std::size_t i) noexcept {
  if (i >= chunk.size() || word_at(chunk, i + 1)) return false;
  if (std::string_view("DPpOoXx").find(chunk[i]) == std::string_view::npos) return false;
  return chunk.substr(start, i - start).find_first_of(":;=") != std::string_view::npos;
}

void tokenize_chunk(std::string_view chunk, std::vector<Token>& out) {
  if (is_url_chunk(chunk)) {
    out.push_back({std::string(chunk), std::string(kUrlToken), 0, false});
    return;
  }
  std::size_t i = 0;
  while (i < chunk.size()) {
    const std::size_t start = i;
    if (word_at(chunk, i) || tag_opens_at(chunk, i)) {
      ++i;
      while (i < chunk.size() && (word_at(chunk, i) || is_joiner_at(chunk, i))) ++i;
      auto raw = std::string(chunk.substr(start, i - start));
      out.push_back({raw, detail::to_lower(raw), 0, false});
    } else {
      ++i;
      while (i < chunk.size() && !word_at(chunk, i) && !tag_opens_at(chunk, i)) ++i;
      if (emoticon_mouth_at(chunk, start, i)) ++i;
      auto raw = std::string(chunk.substr(start, i - start));
      out.push_back({raw, raw, 0, true});
    }
  }
}

std::string cap_runs(std::string_view lower) {
  std::string out;
  out.reserve(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const char c = lower[i];
    if (is_ascii_letter(c) && out.size() >= 2 && out[out.size() - 1] == c &&
        out[out.size() - 2] == c) {
      continue;
    }
    out.push_back(c);
  }
  return out;
}

// Start positions of letter runs of exactly two in an already capped word.
std::vector<std::size_t> double_runs(std::string_view capped) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < capped.size(); ++i) {
    if (is_ascii_letter(capped[i]) && capped[i] == capped[i + 1]) {
      out.push_back(i);
      ++i;
    }
  }
  return out;
}

constexpr std::size_t kMaxSearchedRuns = 12;

// Visits k-subsets of {0..n-1} in lexicographic order; stops when `visit`
// returns true.
template <typename Visit>
bool for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    if (visit(pick)) return true;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  const auto flush = [&](std::size_t begin, std::size_t end) {
    const auto piece = detail::trim(text.substr(begin, end - begin));
    if (!piece.empty()) out.emplace_back(piece);
  };
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const bool chunk_start = i == begin || detail::is_space(text[i - 1]);
    if (chunk_start && is_url_chunk(text.substr(i, 8))) {
      while (i < text.size() && !detail::is_space(text[i])) ++i;
      continue;
    }
    if (c == '\n' || c == '\r') {
      flush(begin, i);
      begin = ++i;
    } else if (is_terminator(c)) {
      while (i < text.size() && is_terminator(text[i])) ++i;
      flush(begin, i);
      begin = i;
    } else {
      ++i;
    }
  }
  flush(begin, text.size());
  return out;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> out;
  for (const auto& chunk : detail::split_whitespace(sentence)) tokenize_chunk(chunk, out);
  return out;
}

Correction correct_spelling(std::string_view raw, const RecognisedWords& recognised) {
  const auto lower = detail::to_lower(raw);
  auto capped = cap_runs(lower);
  const auto result = [&](std::string word) {
    const std::size_t removed = lower.size() - word.size();
    return Correction{std::move(word), removed};
  };
  if (recognised.empty() || recognised.contains(capped)) return result(std::move(capped));

  auto runs = double_runs(capped);
  if (runs.size() > kMaxSearchedRuns) runs.resize(kMaxSearchedRuns);
  std::string found;
  for (std::size_t k = 1; k <= runs.size() && found.empty(); ++k) {
    for_each_combination(runs.size(), k, [&](const std::vector<std::size_t>& pick) {
      std::string candidate;
      candidate.reserve(capped.size());
      std::size_t next = 0;
      for (std::size_t i = 0; i < capped.size(); ++i) {
        if (next < pick.size() && runs[pick[next]] == i) {
          ++next;
          continue;
        }
        candidate.push_back(capped[i]);
      }
      if (!recognised.contains(candidate)) return false;
      found = std::move(candidate);
      return true;
    });
  }
  return result(found.empty() ? std::move(capped) : std::move(found));
}

TokenizedText process(std::string_view text, const RecognisedWords& recognised) {
  TokenizedText out;
  for (const auto& sentence : segment_sentences(text)) {
    auto tokens = tokenize(sentence);
    for (auto& token : tokens) {
      if (token.is_punct_run || token.normalized == kUrlToken) continue;
      const char lead = token.normalized.front();
      if (lead == '#' || lead == '@') continue;
      auto corrected = correct_spelling(token.raw, recognised);
      token.normalized = std::move(corrected.normalized);
      token.letters_removed = corrected.letters_removed;
    }
    out.sentences.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace tensilex
