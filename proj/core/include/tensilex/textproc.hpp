#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tensilex/lexicon.hpp"

namespace tensilex {

/// Normalized stand-in for any http/https/www chunk. Never matches a term.
inline constexpr std::string_view kUrlToken = "<url>";

struct Token {
  std::string raw;
  std::string normalized;
  std::size_t letters_removed = 0;
  bool is_punct_run = false;

  friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

struct TokenizedText {
  std::vector<Sentence> sentences;

  std::size_t token_count() const noexcept;

  friend bool operator==(const TokenizedText&, const TokenizedText&) = default;
};

/// Splits after each maximal run of `.`, `!`, `?` and at newlines; dots and
/// question marks inside a URL chunk do not split. Terminators stay with the
/// sentence they end; surrounding whitespace is trimmed and empty pieces are
/// dropped.
std::vector<std::string> segment_sentences(std::string_view text);

/// Whitespace split, then maximal punctuation runs inside a chunk become their
/// own tokens (a single letter mouth closing a run with `:`, `;` or `=` stays
/// in it, so ":D" is one token). Apostrophes and hyphens between word characters stay inside the
/// word, a leading `#` or `@` stays attached to a hashtag or mention, and URL
/// chunks become a single `<url>` token. `normalized` is the lowercased raw
/// form; no spelling correction happens here.
std::vector<Token> tokenize(std::string_view sentence);

struct Correction {
  std::string normalized;
  std::size_t letters_removed = 0;

  friend bool operator==(const Correction&, const Correction&) = default;
};

/// Repeated-letter correction. Runs longer than two are capped at two; if that
/// is not recognised, runs of two are collapsed to one, trying subsets in
/// order of size and then left to right, and the first recognised form wins.
/// Falls back to the capped form.
Correction correct_spelling(std::string_view raw, const RecognisedWords& recognised);

/// segment_sentences + tokenize + correct_spelling on every word token.
/// Hashtags, mentions and URLs are lowercased but never corrected.
TokenizedText process(std::string_view text, const RecognisedWords& recognised);

}  // namespace tensilex
