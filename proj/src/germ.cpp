#include "lbcalc/germ.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "lbcalc/error.hpp"

namespace lbcalc::germ {

namespace {

std::atomic<ConstructionHook> g_hook{nullptr};

bool finite(const CVector& v) {
  for (Complex c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

std::vector<PowerSeries> zero_components(const std::shared_ptr<const MonomialBasis>& basis, std::size_t dim) {
  return std::vector<PowerSeries>(dim, PowerSeries(basis));
}

// Horner evaluation of sum_k A_k rho^k (sup) and sum_k k A_k rho^{k-1} (derivative).
// Evaluated with the same nesting so that sup <= rho * d after rounding.
struct Majorants {
  double sup = 0.0;
  double d = 0.0;
};

Majorants majorants(const Germ& gamma) {
  const double rho = 1.0 / gamma.index();
  const int top = gamma.degree();
  Majorants out;
  for (std::size_t a = 0; a < gamma.anchors().size(); ++a) {
    for (const auto& s : gamma.at(a)) {
      double t = 0.0;
      double u = 0.0;
      for (int k = top; k >= 1; --k) {
        const double ak = s.degree_abs_sum(k);
        t = ak + rho * t;
        u = k * ak + rho * u;
      }
      out.sup = std::max(out.sup, rho * t);
      out.d = std::max(out.d, u);
    }
  }
  return out;
}

void require_same_shape(const Germ& a, const Germ& b, const char* what) {
  if (!(a.anchors() == b.anchors())) throw ValidationError(std::string(what) + ": germs have different anchors");
  if (a.degree() != b.degree()) throw ValidationError(std::string(what) + ": germs have different truncation degrees");
}

// (1 + |gamma2|_D) / l <= 1 / (n + 2), i.e. (gamma2 + id)(U_l) lies in U_{n+2}.
void require_containment(int n, const Germ& inner, const char* what) {
  const double dn = d_norm(inner);
  const int l = inner.index();
  if (!((1.0 + dn) * (n + 2.0) <= static_cast<double>(l))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " requires 1/l + |gamma2|_D / l <= 1/(n + 2), i.e. (1 + " << dn << ") * " << (n + 2)
        << " <= " << l;
    throw DomainError(msg.str());
  }
}

// x_i + gamma_i at one anchor.
std::vector<PowerSeries> shifted_identity(const Germ& gamma, std::size_t anchor) {
  std::vector<PowerSeries> inner = gamma.at(anchor);
  for (std::size_t i = 0; i < inner.size(); ++i) inner[i][gamma.basis()->variable(i)] += 1.0;
  return inner;
}

double max_abs_coefficient(const Germ& gamma) {
  double out = 0.0;
  for (std::size_t a = 0; a < gamma.anchors().size(); ++a) {
    for (const auto& s : gamma.at(a)) {
      for (Complex c : s.coefficients()) out = std::max(out, std::abs(c));
    }
  }
  return out;
}

}  // namespace

double max_norm(std::span<const Complex> x) {
  double out = 0.0;
  for (Complex c : x) out = std::max(out, std::abs(c));
  return out;
}

AnchorSet::AnchorSet(std::size_t dim, std::vector<CVector> points)
    : dim_(dim), points_(std::move(points)), min_distance_(std::numeric_limits<double>::infinity()) {
  if (dim == 0) throw ValidationError("anchor dimension must be positive");
  if (points_.empty()) throw ValidationError("anchor set must not be empty");
  for (const auto& p : points_) {
    if (p.size() != dim) throw ValidationError("anchor has the wrong dimension");
    if (!finite(p)) throw ValidationError("anchor has non-finite coordinates");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      CVector diff(dim);
      for (std::size_t k = 0; k < dim; ++k) diff[k] = points_[i][k] - points_[j][k];
      const double dist = max_norm(diff);
      if (dist == 0.0) throw ValidationError("anchors must be pairwise distinct");
      min_distance_ = std::min(min_distance_, dist);
    }
  }
}

AnchorSet AnchorSet::origin(std::size_t dim) { return AnchorSet(dim, {CVector(dim, Complex{})}); }

Germ::Germ(AnchorSet anchors, int index, int degree, std::vector<std::vector<PowerSeries>> series)
    : anchors_(std::move(anchors)), index_(index), degree_(degree), series_(std::move(series)) {
  if (index < 1) throw ValidationError("germ index must be >= 1");
  basis_ = MonomialBasis::get(anchors_.dim(), degree);
  if (anchors_.size() > 1 && !(2.0 / index < anchors_.min_distance())) {
    std::ostringstream msg;
    msg << "balls of radius 1/" << index << " around the anchors overlap: need 2/n < " << anchors_.min_distance();
    throw ValidationError(msg.str());
  }
  if (series_.size() != anchors_.size()) throw ValidationError("germ needs one series family per anchor");
  for (const auto& family : series_) {
    if (family.size() != anchors_.dim()) throw ValidationError("germ needs one series per output component");
    for (const auto& s : family) {
      if (s.basis_ptr() != basis_) throw ValidationError("germ series use a mismatched monomial basis");
      if (s.constant() != Complex{}) throw ValidationError("germ series must vanish at the anchor");
      if (!s.is_finite()) throw ValidationError("germ series has non-finite coefficients");
    }
  }
  if (auto hook = g_hook.load()) hook(*this);
}

Germ Germ::zero(const AnchorSet& anchors, int index, int degree) {
  const auto basis = MonomialBasis::get(anchors.dim(), degree);
  return Germ(anchors, index, degree,
              std::vector<std::vector<PowerSeries>>(anchors.size(), zero_components(basis, anchors.dim())));
}

Germ Germ::linear(const AnchorSet& anchors, int index, const Matrix& a, int degree) {
  if (a.dim() != anchors.dim()) throw ValidationError("linear germ matrix does not match the anchor dimension");
  const auto basis = MonomialBasis::get(anchors.dim(), degree);
  auto family = zero_components(basis, anchors.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    for (std::size_t i = 0; i < a.dim(); ++i) family[j][basis->variable(i)] = a(j, i);
  }
  return Germ(anchors, index, degree, std::vector<std::vector<PowerSeries>>(anchors.size(), family));
}

Germ Germ::restricted(int m) const {
  if (m < index_) throw ValidationError("restriction needs an index >= " + std::to_string(index_));
  return Germ(anchors_, m, degree_, series_);
}

CVector Germ::evaluate(std::span<const Complex> x) const {
  if (x.size() != dim()) throw ValidationError("evaluation point has the wrong dimension");
  for (std::size_t a = 0; a < anchors_.size(); ++a) {
    CVector local(dim());
    for (std::size_t k = 0; k < dim(); ++k) local[k] = x[k] - anchors_[a][k];
    if (max_norm(local) < radius()) {
      CVector out(dim());
      for (std::size_t j = 0; j < dim(); ++j) out[j] = series_[a][j].evaluate(local);
      return out;
    }
  }
  throw DomainError("point lies outside the germ domain of index " + std::to_string(index_));
}

Matrix Germ::linear_part(std::size_t anchor) const {
  Matrix out(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    for (std::size_t i = 0; i < dim(); ++i) out(j, i) = component(anchor, j)[basis_->variable(i)];
  }
  return out;
}

bool Germ::is_zero() const noexcept {
  for (const auto& family : series_) {
    for (const auto& s : family) {
      if (!s.is_zero()) return false;
    }
  }
  return true;
}

void Germ::require_compatible(const Germ& other) const {
  require_same_shape(*this, other, "germ arithmetic");
  if (index_ != other.index_) throw ValidationError("germ arithmetic: germs live on different domains");
}

Germ& Germ::operator+=(const Germ& other) {
  require_compatible(other);
  for (std::size_t a = 0; a < series_.size(); ++a) {
    for (std::size_t j = 0; j < dim(); ++j) series_[a][j] += other.series_[a][j];
  }
  return *this;
}

Germ& Germ::operator-=(const Germ& other) {
  require_compatible(other);
  for (std::size_t a = 0; a < series_.size(); ++a) {
    for (std::size_t j = 0; j < dim(); ++j) series_[a][j] -= other.series_[a][j];
  }
  return *this;
}

Germ& Germ::operator*=(Complex scalar) {
  for (auto& family : series_) {
    for (auto& s : family) s *= scalar;
  }
  return *this;
}

bool Germ::operator==(const Germ& other) const {
  return anchors_ == other.anchors_ && index_ == other.index_ && degree_ == other.degree_ && series_ == other.series_;
}

GermBuilder::GermBuilder(AnchorSet anchors, int index, int degree)
    : anchors_(std::move(anchors)), index_(index), degree_(degree) {
  const auto basis = MonomialBasis::get(anchors_.dim(), degree);
  series_.assign(anchors_.size(), zero_components(basis, anchors_.dim()));
}

GermBuilder& GermBuilder::term(std::size_t anchor, std::span<const int> alpha, std::span<const Complex> coeff) {
  if (anchor >= anchors_.size()) throw ValidationError("anchor index out of range");
  if (coeff.size() != anchors_.dim()) throw ValidationError("term coefficient has the wrong dimension");
  const auto& basis = series_[anchor][0].basis();
  const auto i = basis.find(alpha);
  if (!i) throw ValidationError("multi-index outside the truncation");
  for (std::size_t j = 0; j < coeff.size(); ++j) series_[anchor][j][*i] += coeff[j];
  return *this;
}

GermBuilder& GermBuilder::term(std::size_t anchor, std::initializer_list<int> alpha,
                               std::initializer_list<Complex> coeff) {
  return term(anchor, std::span<const int>(alpha.begin(), alpha.size()),
              std::span<const Complex>(coeff.begin(), coeff.size()));
}

Germ GermBuilder::build() const { return Germ(anchors_, index_, degree_, series_); }

void set_construction_hook(ConstructionHook hook) noexcept { g_hook.store(hook); }
ConstructionHook construction_hook() noexcept { return g_hook.load(); }

double sup_norm(const Germ& gamma) { return majorants(gamma).sup; }
double d_norm(const Germ& gamma) { return majorants(gamma).d; }

int composition_index(int n, int bound) {
  if (n < 1 || bound < 0) throw ValidationError("composition_index needs n >= 1 and bound >= 0");
  const long long l = (static_cast<long long>(bound) + 1) * (static_cast<long long>(n) + 2);
  if (l > std::numeric_limits<int>::max()) throw ValidationError("composition index overflows");
  return static_cast<int>(l);
}

Germ compose(const Germ& gamma1, const Germ& gamma2) {
  require_same_shape(gamma1, gamma2, "compose");
  require_containment(gamma1.index(), gamma2, "compose");
  std::vector<std::vector<PowerSeries>> out;
  out.reserve(gamma1.anchors().size());
  for (std::size_t a = 0; a < gamma1.anchors().size(); ++a) {
    auto family = substitute(gamma1.at(a), shifted_identity(gamma2, a));
    for (std::size_t j = 0; j < family.size(); ++j) family[j] += gamma2.component(a, j);
    out.push_back(std::move(family));
  }
  return Germ(gamma2.anchors(), gamma2.index(), gamma2.degree(), std::move(out));
}

Germ compose_derivative(const Germ& gamma1, const Germ& gamma2, const Germ& dir1, const Germ& dir2) {
  require_same_shape(gamma1, gamma2, "compose_derivative");
  require_same_shape(gamma1, dir1, "compose_derivative");
  require_same_shape(gamma1, dir2, "compose_derivative");
  if (dir1.index() != gamma1.index() || dir2.index() != gamma2.index()) {
    throw ValidationError("compose_derivative: directions must share the indices of the base point");
  }
  require_containment(gamma1.index(), gamma2, "compose_derivative");

  const std::size_t d = gamma1.dim();
  std::vector<std::vector<PowerSeries>> out;
  out.reserve(gamma1.anchors().size());
  for (std::size_t a = 0; a < gamma1.anchors().size(); ++a) {
    // outer = [dir1_j ..., d_i gamma1_j ... (j-major)]
    std::vector<PowerSeries> outer = dir1.at(a);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) outer.push_back(gamma1.component(a, j).derivative(i));
    }
    const auto image = substitute(outer, shifted_identity(gamma2, a));
    std::vector<PowerSeries> family;
    family.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      PowerSeries acc = image[j];
      for (std::size_t i = 0; i < d; ++i) acc += image[d + j * d + i] * dir2.component(a, i);
      acc += dir2.component(a, j);
      family.push_back(std::move(acc));
    }
    out.push_back(std::move(family));
  }
  return Germ(gamma2.anchors(), gamma2.index(), gamma2.degree(), std::move(out));
}

Germ invert(const Germ& gamma) {
  const double dn = d_norm(gamma);
  if (!(dn < 1.0)) {
    throw DomainError("invert: |gamma|_D = " + std::to_string(dn) + " >= 1, gamma + id need not be a local diffeomorphism");
  }
  if (!(dn <= 0.5)) throw DomainError("invert requires |gamma|_D <= 1/2, got " + std::to_string(dn));

  const int n = gamma.index();
  const int target = 12 * n;
  const std::size_t d = gamma.dim();
  const auto& basis = gamma.basis();

  std::vector<std::vector<PowerSeries>> out;
  for (std::size_t a = 0; a < gamma.anchors().size(); ++a) {
    const Matrix lin = Matrix::identity(d) + gamma.linear_part(a);
    const Matrix lin_inv = inverse(lin);

    // Nonlinear remainder: gamma minus its degree-one part.
    std::vector<PowerSeries> nonlinear = gamma.at(a);
    for (auto& s : nonlinear) {
      for (std::size_t i = 0; i < d; ++i) s[basis->variable(i)] = 0.0;
    }

    // eta = L^{-1}(x - N(eta)); each pass fixes one more degree.
    auto apply_inverse = [&](const std::vector<PowerSeries>& rhs) {
      std::vector<PowerSeries> eta(d, PowerSeries(basis));
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
          if (lin_inv(j, i) != Complex{}) eta[j] += lin_inv(j, i) * rhs[i];
        }
      }
      return eta;
    };
    std::vector<PowerSeries> identity;
    for (std::size_t i = 0; i < d; ++i) identity.push_back(PowerSeries::variable(basis, i));

    std::vector<PowerSeries> eta = apply_inverse(identity);
    for (int pass = 1; pass < gamma.degree(); ++pass) {
      const auto image = substitute(nonlinear, eta);
      std::vector<PowerSeries> rhs = identity;
      for (std::size_t i = 0; i < d; ++i) rhs[i] -= image[i];
      eta = apply_inverse(rhs);
    }
    for (std::size_t i = 0; i < d; ++i) eta[i] -= identity[i];
    out.push_back(std::move(eta));
  }
  Germ result(gamma.anchors(), target, gamma.degree(), std::move(out));

  const double bound = 1.0 / (6.0 * n);
  const double sup = sup_norm(result);
  if (!(sup <= bound)) {
    throw InternalError("invert: certified bound sup <= 1/(6n) failed: " + std::to_string(sup));
  }
  double scale = 1.0;
  for (std::size_t a = 0; a < gamma.anchors().size(); ++a) {
    for (const auto& s : gamma.at(a)) {
      for (Complex c : s.coefficients()) scale += std::abs(c);
    }
  }
  try {
    const double res = max_abs_coefficient(residual(gamma, result));
    if (!(res <= 1e-9 * scale)) {
      throw InternalError("invert: residual coefficient " + std::to_string(res) + " does not vanish");
    }
  } catch (const DomainError& e) {
    throw InternalError(std::string("invert: residual outside its domain: ") + e.what());
  }
  return result;
}

Germ residual(const Germ& gamma1, const Germ& gamma2) {
  if (gamma2.index() != 12 * gamma1.index()) {
    throw ValidationError("residual expects the second germ at index 12 * " + std::to_string(gamma1.index()));
  }
  return compose(gamma1, gamma2);
}

double derivative_bound(const Germ& gamma, int l) {
  if (l < 0) throw ValidationError("derivative order must be nonnegative");
  const double n = gamma.index();
  const double big_r = 1.0 / (n * (n + 1.0));
  double factor = 2.0;
  for (int k = 1; k <= l; ++k) factor *= k * (4.0 * std::numbers::e / big_r);
  return factor * sup_norm(gamma);
}

}  // namespace lbcalc::germ
