#include "lbcalc/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "lbcalc/error.hpp"

namespace lbcalc::germ {

namespace {

constexpr std::size_t kMaxVars = 8;
constexpr int kMaxDegree = 24;
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;

// Exponent vectors of total degree k, leading exponents descending.
void append_degree(std::size_t vars, int k, std::vector<MultiIndex>& out) {
  MultiIndex alpha(vars, 0);
  auto fill = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == vars) {
      alpha[pos] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  fill(fill, 0, k);
}

}  // namespace

std::shared_ptr<const MonomialBasis> MonomialBasis::get(std::size_t vars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{vars, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(vars, degree);
  return slot;
}

MonomialBasis::MonomialBasis(std::size_t vars, int degree) : vars_(vars), degree_(degree) {
  if (vars == 0 || vars > kMaxVars) {
    throw ValidationError("number of variables must be in [1, " + std::to_string(kMaxVars) + "]");
  }
  if (degree < 1 || degree > kMaxDegree) {
    throw ValidationError("truncation degree must be in [1, " + std::to_string(kMaxDegree) + "]");
  }
  for (int k = 0; k <= degree; ++k) {
    append_degree(vars, k, exponents_);
    degree_end_.push_back(exponents_.size());
  }
  const std::size_t n = exponents_.size();
  if (n * n > kMaxTableEntries) throw ValidationError("monomial basis too large for the product table");

  degrees_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    degrees_.push_back(std::accumulate(exponents_[i].begin(), exponents_[i].end(), 0));
    lookup_.emplace(exponents_[i], i);
  }

  product_.assign(n * n, kNone);
  MultiIndex sum(vars);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t limit = degree_end(degree - degrees_[i]);
    for (std::size_t j = 0; j < limit; ++j) {
      for (std::size_t v = 0; v < vars; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
      product_[i * n + j] = static_cast<std::uint32_t>(lookup_.at(sum));
    }
  }

  steps_.assign(n, Step{0, 0});
  for (std::size_t i = 1; i < n; ++i) {
    const auto& alpha = exponents_[i];
    const auto v = static_cast<std::size_t>(std::find_if(alpha.begin(), alpha.end(), [](int e) { return e > 0; }) -
                                            alpha.begin());
    MultiIndex pred = alpha;
    --pred[v];
    steps_[i] = Step{v, lookup_.at(pred)};
  }
}

std::size_t MonomialBasis::degree_end(int k) const {
  if (k < 0) return 0;
  return degree_end_[static_cast<std::size_t>(std::min(k, degree_))];
}

std::optional<std::size_t> MonomialBasis::find(std::span<const int> alpha) const {
  if (alpha.size() != vars_) return std::nullopt;
  auto it = lookup_.find(MultiIndex(alpha.begin(), alpha.end()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t MonomialBasis::lowered(std::size_t i, std::size_t var) const {
  if (exponents_[i][var] == 0) return npos;
  MultiIndex alpha = exponents_[i];
  --alpha[var];
  return lookup_.at(alpha);
}

PowerSeries::PowerSeries(std::shared_ptr<const MonomialBasis> basis) : basis_(std::move(basis)) {
  if (!basis_) throw ValidationError("power series needs a monomial basis");
  coeffs_.assign(basis_->size(), Complex{});
}

PowerSeries PowerSeries::variable(std::shared_ptr<const MonomialBasis> basis, std::size_t v) {
  PowerSeries out(std::move(basis));
  if (v >= out.basis().vars()) throw ValidationError("variable index out of range");
  out[out.basis().variable(v)] = 1.0;
  return out;
}

Complex PowerSeries::coefficient(std::span<const int> alpha) const {
  const auto i = basis_->find(alpha);
  return i ? coeffs_[*i] : Complex{};
}

bool PowerSeries::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

bool PowerSeries::is_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double PowerSeries::degree_abs_sum(int k) const {
  double total = 0.0;
  for (std::size_t i = basis_->degree_end(k - 1); i < basis_->degree_end(k); ++i) total += std::abs(coeffs_[i]);
  return total;
}

void PowerSeries::require_same_basis(const PowerSeries& other) const {
  if (basis_ != other.basis_) throw ValidationError("power series live over different monomial bases");
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& other) {
  require_same_basis(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& other) {
  require_same_basis(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

PowerSeries& PowerSeries::operator*=(Complex scalar) {
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  a.require_same_basis(b);
  const MonomialBasis& basis = a.basis();
  PowerSeries out(a.basis_);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Complex ai = a.coeffs_[i];
    if (ai == Complex{}) continue;
    const std::size_t limit = basis.degree_end(basis.degree() - basis.total_degree(i));
    for (std::size_t j = 0; j < limit; ++j) {
      const Complex bj = b.coeffs_[j];
      if (bj == Complex{}) continue;
      out.coeffs_[basis.product(i, j)] += ai * bj;
    }
  }
  return out;
}

PowerSeries PowerSeries::derivative(std::size_t var) const {
  if (var >= basis_->vars()) throw ValidationError("variable index out of range");
  PowerSeries out(basis_);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    const std::size_t lower = basis_->lowered(i, var);
    if (lower != MonomialBasis::npos) out.coeffs_[lower] += static_cast<double>(basis_->exponent(i)[var]) * coeffs_[i];
  }
  return out;
}

Complex PowerSeries::evaluate(std::span<const Complex> x) const {
  if (x.size() != basis_->vars()) throw ValidationError("evaluation point has the wrong dimension");
  std::vector<Complex> power(coeffs_.size());
  power[0] = 1.0;
  Complex total = coeffs_[0];
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    const auto step = basis_->predecessor(i);
    power[i] = power[step.pred] * x[step.var];
    total += coeffs_[i] * power[i];
  }
  return total;
}

std::vector<PowerSeries> substitute(std::span<const PowerSeries> outer, std::span<const PowerSeries> inner) {
  if (outer.empty()) return {};
  const auto& basis_ptr = outer.front().basis_ptr();
  const MonomialBasis& basis = *basis_ptr;
  if (inner.size() != basis.vars()) throw ValidationError("substitution needs one inner series per variable");
  for (const auto& s : outer) {
    if (s.basis_ptr() != basis_ptr) throw ValidationError("outer series live over different monomial bases");
  }
  for (const auto& s : inner) {
    if (s.basis_ptr() != basis_ptr) throw ValidationError("inner series live over a different monomial basis");
    if (s.constant() != Complex{}) throw ValidationError("inner series must vanish at the origin");
  }

  // Only powers that some outer term uses, plus their predecessor chains.
  std::vector<char> needed(basis.size(), 0);
  for (const auto& s : outer) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (s[i] != Complex{}) needed[i] = 1;
    }
  }
  for (std::size_t i = basis.size(); i-- > 1;) {
    if (needed[i]) needed[basis.predecessor(i).pred] = 1;
  }

  std::vector<std::optional<PowerSeries>> power(basis.size());
  power[0].emplace(basis_ptr);
  (*power[0])[0] = 1.0;
  for (std::size_t i = 1; i < basis.size(); ++i) {
    if (!needed[i]) continue;
    const auto step = basis.predecessor(i);
    power[i].emplace(*power[step.pred] * inner[step.var]);
  }

  std::vector<PowerSeries> out;
  out.reserve(outer.size());
  for (const auto& s : outer) {
    PowerSeries acc(basis_ptr);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (s[i] == Complex{}) continue;
      const PowerSeries& p = *power[i];
      for (std::size_t k = 0; k < basis.size(); ++k) acc[k] += s[i] * p[k];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace lbcalc::germ
