#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tensilex/annotated.hpp"
#include "tensilex/lexicon.hpp"

namespace bench {

const tensilex::LexiconSet& shipped_lexicon();

// Tweet-sized texts mixing lexicon terms, boosters, negators, emoticons and
// plain filler, a sentence break now and then.
std::vector<std::string> make_texts(std::size_t n, std::uint64_t seed);

// Texts with golds scored by the shipped lexicon.
std::vector<tensilex::AnnotatedExample> make_corpus(std::size_t n, std::uint64_t seed);

// The shipped lexicon with `changes` term strengths moved by one, so a climb
// over make_corpus has error to remove.
tensilex::LexiconSet perturbed_lexicon(std::size_t changes, std::uint64_t seed);

}  // namespace bench
