#pragma once

#include "lbcalc/matrix.hpp"

namespace lbcalc::lie {

/// Bracket-compatible norm: `scale` times the induced 1-norm. With scale 2
/// the bracket inequality |[x,y]| <= |x| |y| holds because
/// |xy - yx|_1 <= 2 |x|_1 |y|_1.
struct CompatibleNorm {
  double scale = 2.0;
  double operator()(const Matrix& x) const;
};

inline constexpr CompatibleNorm kCompatibleNorm{};

/// BCH convergence radius for the norm sum of the two arguments, log(3/2).
double bch_input_bound();
/// Bound on the norm of the BCH product inside that radius, log 2.
double bch_output_bound();

/// 2 * |x|_1. Throws ValidationError on non-finite input.
double compatible_norm(const Matrix& x);

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
Matrix mat_exp(const Matrix& x);

/// Principal logarithm for |g - I|_1 < 1 (DomainError otherwise), computed by
/// inverse scaling and squaring: repeated square roots until g is close to
/// the identity, then the atanh series.
Matrix mat_log(const Matrix& g);

/// The BCH product x * y = log(exp x exp y) truncated at bracket degree
/// `order` (1..12), built only from iterated commutators. Requires
/// compatible_norm(x) + compatible_norm(y) < log(3/2).
Matrix bch(const Matrix& x, const Matrix& y, int order);

}  // namespace lbcalc::lie
