#pragma once

#include <string>
#include <vector>

#include "tensilex/scorer.hpp"

namespace tensilex {

/// One human-coded text. Golds are the per-scale coder mean, kept both raw and
/// rounded half away from zero.
struct AnnotatedExample {
  std::string id;
  std::string subcorpus;
  std::string text;
  std::vector<int> coder_stress;
  std::vector<int> coder_relax;
  int gold_stress = kNeutralStress;
  int gold_relax = kNeutralRelaxation;
  double gold_stress_raw = kNeutralStress;
  double gold_relax_raw = kNeutralRelaxation;

  DualScore gold() const noexcept { return {gold_stress, gold_relax}; }

  friend bool operator==(const AnnotatedExample&, const AnnotatedExample&) = default;
};

}  // namespace tensilex
