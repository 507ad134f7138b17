#include "lbcalc/dirichlet.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "lbcalc/bch_recursion.hpp"
#include "lbcalc/error.hpp"
#include "lbcalc/lie.hpp"

namespace lbcalc::dirichlet {

namespace {

void require_same_dim(const DirichletSeries& a, const DirichletSeries& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("Dirichlet series coefficient dimensions differ: " + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()));
  }
}

Frequency checked_product(Frequency a, Frequency b) {
  Frequency out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ValidationError("Dirichlet frequency overflow in bracket");
  return out;
}

}  // namespace

DirichletSeries::DirichletSeries(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("coefficient dimension must be positive");
}

DirichletSeries DirichletSeries::constant(const Matrix& a) {
  DirichletSeries out(a.dim());
  out.add_term(1, a);
  return out;
}

DirichletSeries& DirichletSeries::add_term(Frequency n, const Matrix& coeff) {
  if (n == 0) throw ValidationError("Dirichlet frequencies start at 1");
  if (coeff.dim() != dim_) throw ValidationError("coefficient dimension does not match series");
  if (!coeff.is_finite()) throw ValidationError("coefficient has non-finite entries");
  auto it = terms_.find(n);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(n, coeff);
  } else {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

Matrix DirichletSeries::coefficient(Frequency n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? Matrix(dim_) : it->second;
}

DirichletSeries& DirichletSeries::operator+=(const DirichletSeries& other) {
  require_same_dim(*this, other);
  for (const auto& [n, c] : other.terms_) add_term(n, c);
  return *this;
}

DirichletSeries& DirichletSeries::operator-=(const DirichletSeries& other) {
  require_same_dim(*this, other);
  for (const auto& [n, c] : other.terms_) add_term(n, -c);
  return *this;
}

DirichletSeries& DirichletSeries::operator*=(Complex scalar) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= scalar;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

HalfPlane::HalfPlane(double s) : s_(s) {
  if (!std::isfinite(s)) throw ValidationError("half-plane abscissa must be finite");
}

double norm_s(const DirichletSeries& gamma, HalfPlane s) {
  double total = 0.0;
  for (const auto& [n, a] : gamma.terms()) {
    total += lie::compatible_norm(a) * std::pow(static_cast<double>(n), -s.s());
  }
  return total;
}

DirichletSeries bracket(const DirichletSeries& a, const DirichletSeries& b) {
  require_same_dim(a, b);
  // N -> (min(n1, n2), max(n1, n2)) -> partial sum of at most two commutators.
  std::map<Frequency, std::map<std::pair<Frequency, Frequency>, Matrix>> groups;
  for (const auto& [n1, u] : a.terms()) {
    for (const auto& [n2, v] : b.terms()) {
      const Frequency n = checked_product(n1, n2);
      const auto key = std::minmax(n1, n2);
      auto& slot = groups[n];
      const Matrix c = commutator(u, v);
      auto it = slot.find(key);
      if (it == slot.end()) {
        slot.emplace(key, c);
      } else {
        it->second += c;
      }
    }
  }
  DirichletSeries out(a.dim());
  for (const auto& [n, slot] : groups) {
    auto it = slot.begin();
    Matrix total = it->second;
    for (++it; it != slot.end(); ++it) total += it->second;
    out.add_term(n, total);
  }
  return out;
}

Matrix evaluate(const DirichletSeries& gamma, Complex z) {
  Matrix out(gamma.dim());
  for (const auto& [n, a] : gamma.terms()) {
    out += std::exp(-z * std::log(static_cast<double>(n))) * a;
  }
  return out;
}

DirichletSeries bch_series(const DirichletSeries& a, const DirichletSeries& b, HalfPlane s, int order) {
  require_same_dim(a, b);
  const double norm_sum = norm_s(a, s) + norm_s(b, s);
  if (!(norm_sum < lie::bch_input_bound())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bch_series requires |a|_s + |b|_s < log(3/2) = " << lie::bch_input_bound() << ", got "
        << norm_sum << " at s = " << s.s();
    throw DomainError(msg.str());
  }
  const auto parts = detail::bch_components(
      a, b, order, [](const DirichletSeries& u, const DirichletSeries& v) { return bracket(u, v); });
  DirichletSeries out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += parts[i];
  return out;
}

Matrix exp_pointwise(const DirichletSeries& gamma, Complex z) { return lie::mat_exp(evaluate(gamma, z)); }

LeadingCoefficient leading_coefficient(const DirichletSeries& gamma, double re_probe) {
  if (!std::isfinite(re_probe) || re_probe < 2.0) {
    throw DomainError("leading_coefficient requires a finite probe abscissa >= 2");
  }
  double tail = 0.0;
  for (const auto& [n, a] : gamma.terms()) {
    if (n >= 2) tail += lie::compatible_norm(a) * std::pow(static_cast<double>(n), -re_probe);
  }
  return {evaluate(gamma, Complex(re_probe, 0.0)), tail};
}

}  // namespace lbcalc::dirichlet
