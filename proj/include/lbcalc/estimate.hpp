#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lbcalc/germ.hpp"
#include "lbcalc/matrix.hpp"

namespace lbcalc::estimate {

using Evaluator = std::function<CVector(const CVector&)>;

/// A bounded analytic map on the max-norm ball B_R(center) in C^d.
struct AnalyticSample {
  Evaluator evaluator;
  CVector center;
  double radius = 0.0;
  /// Upper bound for sup |f| on the ball (supplied by the caller).
  double sup_bound = 0.0;
  /// Optional certified bounds for the k-linear Taylor terms, k = 0, 1, ...
  /// When present the contour quadrature is skipped.
  std::optional<std::vector<double>> degree_sups;
};

/// One sample per anchor of a germ: evaluator, radius 1/n, sup_bound from
/// sup_norm and degree_sups from the coefficient sums.
std::vector<AnalyticSample> samples_from_germ(const germ::Germ& gamma);

inline constexpr int kDefaultNodes = 256;

/// (1/k!) f^(k)(a)(v, ..., v) by the trapezoid rule on |z| = s with `nodes`
/// equally spaced nodes, summed in node order.
CVector cauchy_directional_coefficient(const AnalyticSample& f, const CVector& v, double s, int k,
                                       int nodes = kDefaultNodes);

struct Polarization {
  double factor;  // (2k)^k / k!
  double bound;   // (2e)^k
};
Polarization polarization_factor(int k);

/// (2k)^k / k! <= (2e)^k decided in exact integer arithmetic.
bool polarization_within_bound(int k);

struct EstimateOptions {
  int degree = germ::kDefaultDegree;
  int nodes = kDefaultNodes;
  /// The contour radius is s = R (1 - radius_gap).
  double radius_gap = 1e-6;
  std::uint64_t seed = 0x5eed;
};

struct EstimateReport {
  std::vector<double> degrees;       // per-degree sup estimates, k = 0..degree
  std::vector<double> partial_sums;  // sum_{j <= k} degrees[j] r^j
  double lhs = 0.0;
  double rhs = 0.0;
  bool verdict = false;
  double R = 0.0;
  double r = 0.0;
  double s = 0.0;
  int Q = 0;
};

/// Checks sum_k sup_{f, a} |f^(k)(a)|/k! r^k <= R/(R - 2er) sup |f| over the
/// family, truncated at `options.degree`. Requires r < R/(2e).
EstimateReport verify_bounded_series(const std::vector<AnalyticSample>& family, double r,
                                     const EstimateOptions& options = {});

}  // namespace lbcalc::estimate
