#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lbcalc/matrix.hpp"

namespace lbcalc::germ {

using MultiIndex = std::vector<int>;

/// All monomials x^alpha in `vars` variables with |alpha| <= degree, in
/// graded order: index 0 is the constant, then degree 1 (x_0, x_1, ...),
/// then degree 2, and so on. Within a degree the order is lexicographic
/// with larger leading exponents first.
///
/// Instances are immutable and shared; use get().
class MonomialBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static std::shared_ptr<const MonomialBasis> get(std::size_t vars, int degree);

  MonomialBasis(std::size_t vars, int degree);

  std::size_t vars() const noexcept { return vars_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return exponents_.size(); }

  const MultiIndex& exponent(std::size_t i) const { return exponents_[i]; }
  int total_degree(std::size_t i) const { return degrees_[i]; }
  /// One past the last index of total degree <= k.
  std::size_t degree_end(int k) const;

  std::optional<std::size_t> find(std::span<const int> alpha) const;
  std::size_t variable(std::size_t v) const { return 1 + v; }

  /// Index of alpha_i + alpha_j, or npos if the degree exceeds the truncation.
  std::size_t product(std::size_t i, std::size_t j) const {
    const std::uint32_t p = product_[i * size() + j];
    return p == kNone ? npos : p;
  }

  /// For i >= 1: the first variable v with alpha_v > 0 and the index of alpha - e_v.
  struct Step {
    std::size_t var;
    std::size_t pred;
  };
  Step predecessor(std::size_t i) const { return steps_[i]; }

  /// Index of alpha - e_var, or npos when alpha_var == 0.
  std::size_t lowered(std::size_t i, std::size_t var) const;

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::size_t vars_;
  int degree_;
  std::vector<MultiIndex> exponents_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_end_;
  std::map<MultiIndex, std::size_t> lookup_;
  std::vector<std::uint32_t> product_;
  std::vector<Step> steps_;
};

/// Dense truncated power series with complex coefficients over a shared
/// MonomialBasis. All arithmetic drops terms above the basis degree.
class PowerSeries {
 public:
  explicit PowerSeries(std::shared_ptr<const MonomialBasis> basis);

  static PowerSeries variable(std::shared_ptr<const MonomialBasis> basis, std::size_t v);

  const MonomialBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const noexcept { return basis_; }

  Complex operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }

  /// Zero if alpha is outside the basis.
  Complex coefficient(std::span<const int> alpha) const;
  Complex constant() const { return coeffs_[0]; }

  bool is_zero() const noexcept;
  bool is_finite() const noexcept;

  /// sum_{|alpha| = k} |c_alpha|
  double degree_abs_sum(int k) const;

  PowerSeries& operator+=(const PowerSeries& other);
  PowerSeries& operator-=(const PowerSeries& other);
  PowerSeries& operator*=(Complex scalar);

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(Complex c, PowerSeries a) { return a *= c; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);

  PowerSeries derivative(std::size_t var) const;

  /// Direct evaluation at a point (no truncation issues: the series is a polynomial).
  Complex evaluate(std::span<const Complex> x) const;

  bool operator==(const PowerSeries& other) const { return coeffs_ == other.coeffs_; }

 private:
  void require_same_basis(const PowerSeries& other) const;

  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<Complex> coeffs_;
};

/// Substitutes `inner` (one series per variable, no constant terms) into
/// each series of `outer`, truncating at the basis degree.
std::vector<PowerSeries> substitute(std::span<const PowerSeries> outer, std::span<const PowerSeries> inner);

}  // namespace lbcalc::germ
