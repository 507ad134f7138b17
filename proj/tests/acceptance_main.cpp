#include <cstdio>
#include <cstdlib>

#include "lbcalc/acceptance.hpp"

int main() {
  lbcalc::acceptance::SuiteOptions options;
  if (const char* seed = std::getenv("LBCALC_SEED")) options.seed = std::strtoull(seed, nullptr, 10);

  const auto results = lbcalc::acceptance::run_all(options);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s %2d %s: %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                r.seconds);
    if (!r.passed) ++failed;
  }
  if (results.size() != static_cast<std::size_t>(lbcalc::acceptance::kCriterionCount)) {
    std::printf("FAIL expected %d criteria, ran %zu\n", lbcalc::acceptance::kCriterionCount, results.size());
    return 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
