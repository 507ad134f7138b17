#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lbcalc::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Deterministic summary of what was measured.
  std::string detail;
  /// Wall-clock time; not part of `detail` so reports stay reproducible.
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
};

inline constexpr int kCriterionCount = 10;

/// Runs criteria 1..9 and then the germ-construction audit (10), which
/// covers every germ built while the others ran.
std::vector<CriterionResult> run_all(const SuiteOptions& options = {});

}  // namespace lbcalc::acceptance
