#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lbcalc/matrix.hpp"
#include "lbcalc/power_series.hpp"

namespace lbcalc::germ {

inline constexpr int kDefaultDegree = 8;

/// Finite set of pairwise distinct points in C^d. Distances use the max norm.
class AnchorSet {
 public:
  AnchorSet(std::size_t dim, std::vector<CVector> points);
  /// The single anchor 0 in C^dim.
  static AnchorSet origin(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const CVector& operator[](std::size_t i) const { return points_.at(i); }
  const std::vector<CVector>& points() const noexcept { return points_; }
  /// Smallest pairwise distance; +infinity for a single anchor.
  double min_distance() const noexcept { return min_distance_; }

  bool operator==(const AnchorSet& other) const { return points_ == other.points_; }

 private:
  std::size_t dim_;
  std::vector<CVector> points_;
  double min_distance_;
};

/// max_i |x_i|
double max_norm(std::span<const Complex> x);

/// A map defined near the anchors that fixes each of them, stored as one
/// truncated power series in (x - a) per anchor a and output component.
///
/// The domain is the union of the open max-norm balls of radius 1/index
/// around the anchors; several anchors need 2/index < min_distance so the
/// balls are disjoint. Constant terms must be zero.
class Germ {
 public:
  /// series[a][j] is component j at anchor a.
  Germ(AnchorSet anchors, int index, int degree, std::vector<std::vector<PowerSeries>> series);

  static Germ zero(const AnchorSet& anchors, int index, int degree = kDefaultDegree);
  /// x - a |-> A (x - a) at every anchor.
  static Germ linear(const AnchorSet& anchors, int index, const Matrix& a, int degree = kDefaultDegree);

  const AnchorSet& anchors() const noexcept { return anchors_; }
  std::size_t dim() const noexcept { return anchors_.dim(); }
  int index() const noexcept { return index_; }
  int degree() const noexcept { return degree_; }
  double radius() const noexcept { return 1.0 / index_; }
  const std::shared_ptr<const MonomialBasis>& basis() const noexcept { return basis_; }

  const std::vector<PowerSeries>& at(std::size_t anchor) const { return series_.at(anchor); }
  const PowerSeries& component(std::size_t anchor, std::size_t j) const { return series_.at(anchor).at(j); }

  /// The same germ on the smaller domain of index m >= index().
  Germ restricted(int m) const;
  /// Value at x; DomainError when x is outside the domain.
  CVector evaluate(std::span<const Complex> x) const;
  /// Degree-one coefficients at an anchor: entry (j, i) is d gamma_j / d x_i.
  Matrix linear_part(std::size_t anchor) const;

  bool is_zero() const noexcept;

  Germ& operator+=(const Germ& other);
  Germ& operator-=(const Germ& other);
  Germ& operator*=(Complex scalar);
  friend Germ operator+(Germ a, const Germ& b) { return a += b; }
  friend Germ operator-(Germ a, const Germ& b) { return a -= b; }
  friend Germ operator*(Complex c, Germ a) { return a *= c; }

  bool operator==(const Germ& other) const;

 private:
  void require_compatible(const Germ& other) const;

  AnchorSet anchors_;
  int index_;
  int degree_;
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<std::vector<PowerSeries>> series_;
};

/// Accumulates terms and builds a Germ.
class GermBuilder {
 public:
  GermBuilder(AnchorSet anchors, int index, int degree = kDefaultDegree);

  GermBuilder& term(std::size_t anchor, std::span<const int> alpha, std::span<const Complex> coeff);
  GermBuilder& term(std::size_t anchor, std::initializer_list<int> alpha, std::initializer_list<Complex> coeff);
  Germ build() const;

 private:
  AnchorSet anchors_;
  int index_;
  int degree_;
  std::vector<std::vector<PowerSeries>> series_;
};

/// Called with every constructed Germ. Pass nullptr to remove.
using ConstructionHook = void (*)(const Germ&);
void set_construction_hook(ConstructionHook hook) noexcept;
ConstructionHook construction_hook() noexcept;

/// Coefficient majorant of sup |gamma| on the domain:
/// max over anchors and components j of sum_alpha |c_{alpha j}| index^{-|alpha|}.
double sup_norm(const Germ& gamma);

/// Majorant of the derivative's operator norm (max-norm on C^d) on the domain:
/// max over anchors and j of sum_alpha |alpha| |c_{alpha j}| index^{1-|alpha|}.
/// Evaluated so that sup_norm(gamma) <= (1/index) * d_norm(gamma) holds in
/// floating point.
double d_norm(const Germ& gamma);

/// Smallest codomain index for which a germ of index n, with all images
/// within `bound` of the identity, composes: (bound + 1)(n + 2).
int composition_index(int n, int bound);

/// (gamma1 + id) o (gamma2 + id) - id = gamma1 o (gamma2 + id) + gamma2,
/// at the index of gamma2. Requires (1 + d_norm(gamma2)) (n + 2) <= l.
Germ compose(const Germ& gamma1, const Germ& gamma2);

/// Directional derivative of compose at (gamma1, gamma2) along (dir1, dir2):
/// dir1 o (gamma2 + id) + gamma1'(gamma2 + id) dir2 + dir2.
Germ compose_derivative(const Germ& gamma1, const Germ& gamma2, const Germ& dir1, const Germ& dir2);

/// eta - id where eta inverts gamma + id, at index 12n. Requires
/// d_norm(gamma) <= 1/2. The result is checked to have a vanishing residual
/// and sup_norm <= 1/(6n).
Germ invert(const Germ& gamma);

/// compose(gamma1, gamma2) for gamma2 at index 12 * gamma1.index().
Germ residual(const Germ& gamma1, const Germ& gamma2);

/// Cauchy bound for the l-th derivative on the next smaller domain:
/// 2 l! (4e/R)^l sup_norm(gamma) with R = 1/(n(n+1)).
double derivative_bound(const Germ& gamma, int l);

}  // namespace lbcalc::germ
