#pragma once

// Straightforward reference implementations used to check the library.

#include <cstddef>
#include <string>
#include <vector>

#include "tensilex/lexicon.hpp"
#include "tensilex/metrics.hpp"
#include "tensilex/textproc.hpp"

namespace tensilex::testing {

/// Alpha by enumerating every ordered pair of pairable values, within units
/// for observed disagreement and across all values for expected disagreement.
double brute_force_alpha(const CodingMatrix& m, AlphaMetric metric);

/// Tries every subset of double-letter runs, keeps the recognised ones and
/// picks the one with fewest deletions, then leftmost deletions.
Correction brute_force_spelling(const std::string& raw, const RecognisedWords& recognised);

double entropy_bits(const std::vector<int>& labels);

/// Information gain of "document i contains the feature" from entropies.
double gain_oracle(const std::vector<bool>& present, const std::vector<int>& labels);

/// All n-grams (n = 1..3) of each token list, never joining lists.
std::vector<std::string> ngrams_within(const std::vector<std::vector<std::string>>& sentences);

}  // namespace tensilex::testing
