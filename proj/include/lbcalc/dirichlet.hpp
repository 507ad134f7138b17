#pragma once

#include <cstdint>
#include <map>

#include "lbcalc/matrix.hpp"

namespace lbcalc::dirichlet {

using Frequency = std::uint64_t;

/// Finitely supported Dirichlet series sum_n a_n n^{-z} with matrix
/// coefficients. Frequencies are >= 1, all coefficients share `dim()`, and
/// exactly-zero coefficients are never stored.
class DirichletSeries {
 public:
  explicit DirichletSeries(std::size_t dim);

  /// The constant series a * 1^{-z}.
  static DirichletSeries constant(const Matrix& a);

  /// Accumulates `coeff` into frequency `n`.
  DirichletSeries& add_term(Frequency n, const Matrix& coeff);

  std::size_t dim() const noexcept { return dim_; }
  const std::map<Frequency, Matrix>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  Frequency max_frequency() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  /// Zero matrix when `n` is not in the support.
  Matrix coefficient(Frequency n) const;

  DirichletSeries& operator+=(const DirichletSeries& other);
  DirichletSeries& operator-=(const DirichletSeries& other);
  DirichletSeries& operator*=(Complex scalar);

  friend DirichletSeries operator+(DirichletSeries a, const DirichletSeries& b) { return a += b; }
  friend DirichletSeries operator-(DirichletSeries a, const DirichletSeries& b) { return a -= b; }
  friend DirichletSeries operator*(Complex c, DirichletSeries a) { return a *= c; }
  friend DirichletSeries operator*(DirichletSeries a, Complex c) { return a *= c; }

  bool operator==(const DirichletSeries&) const = default;

 private:
  std::size_t dim_;
  std::map<Frequency, Matrix> terms_;
};

/// Abscissa of the closed half plane Re z >= s.
class HalfPlane {
 public:
  explicit HalfPlane(double s);
  double s() const noexcept { return s_; }

 private:
  double s_;
};

/// sum_n |a_n| n^{-s} with the compatible matrix norm.
double norm_s(const DirichletSeries& gamma, HalfPlane s);

/// Convolution bracket: the coefficient at N is sum_{n1 n2 = N} [a_{n1}, b_{n2}].
/// Contributions are grouped by the unordered frequency pair before summing,
/// so bracket(a, b) == -bracket(b, a) holds bit for bit.
DirichletSeries bracket(const DirichletSeries& a, const DirichletSeries& b);

/// sum_n a_n exp(-z ln n).
Matrix evaluate(const DirichletSeries& gamma, Complex z);

/// BCH product in the series Lie algebra, truncated at bracket degree
/// `order`. Requires norm_s(a) + norm_s(b) < log(3/2).
DirichletSeries bch_series(const DirichletSeries& a, const DirichletSeries& b, HalfPlane s, int order);

/// mat_exp(evaluate(gamma, z)).
Matrix exp_pointwise(const DirichletSeries& gamma, Complex z);

struct LeadingCoefficient {
  Matrix value;       // evaluate(gamma, re_probe)
  double tail_bound;  // sum_{n >= 2} |a_n| n^{-re_probe}
};

/// Recovers a_1 as the limit Re z -> infinity: |value - a_1| <= tail_bound.
/// Requires re_probe >= 2.
LeadingCoefficient leading_coefficient(const DirichletSeries& gamma, double re_probe);

}  // namespace lbcalc::dirichlet
