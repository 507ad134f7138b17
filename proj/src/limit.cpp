#include "lbcalc/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <boost/math/special_functions/trigamma.hpp>

#include "lbcalc/error.hpp"
#include "lbcalc/lie.hpp"

namespace lbcalc::limit {

namespace {

template <class T>
const T& require_kind(const StepElement& x, ElementKind expected) {
  if (const T* p = std::get_if<T>(&x)) return *p;
  throw ConfigurationError("direct limit of " + std::string(kind_name(expected)) + " elements has no norm for " +
                           std::string(kind_name(kind_of(x))) + " elements");
}

// Rescales x to norm `target`, then nudges it strictly below `bound`.
template <class T, class Norm>
T rescale(T x, double target, double bound, Norm norm) {
  const double current = norm(x);
  if (current == 0.0 || target == 0.0) {
    x *= Complex(0.0);
    return x;
  }
  x *= Complex(target / current);
  while (!(norm(x) < bound)) x *= Complex(1.0 - 0x1.0p-40);
  return x;
}

}  // namespace

ElementKind kind_of(const StepElement& x) noexcept {
  switch (x.index()) {
    case 0:
      return ElementKind::matrix;
    case 1:
      return ElementKind::dirichlet;
    default:
      return ElementKind::germ;
  }
}

std::string_view kind_name(ElementKind kind) noexcept {
  switch (kind) {
    case ElementKind::matrix:
      return "matrix";
    case ElementKind::dirichlet:
      return "dirichlet";
    case ElementKind::germ:
      return "germ";
  }
  return "unknown";
}

StepDecomposition& StepDecomposition::add(int step, StepElement element) {
  if (step < 1) throw ValidationError("step indices start at 1");
  if (!terms_.empty() && step <= terms_.back().step) throw ValidationError("step indices must strictly increase");
  terms_.push_back({step, std::move(element)});
  return *this;
}

DirectLimit matrix_limit() {
  DirectLimit out;
  out.kind = ElementKind::matrix;
  out.name = "matrices";
  out.step_norm = [](int step, const StepElement& x) {
    const auto& m = require_kind<Matrix>(x, ElementKind::matrix);
    if (step < 1 || m.dim() != static_cast<std::size_t>(step)) {
      throw ValidationError("step " + std::to_string(step) + " holds " + std::to_string(step) + "x" +
                            std::to_string(step) + " matrices");
    }
    return lie::compatible_norm(m);
  };
  out.sum = [](const StepDecomposition& x, int step) -> StepElement {
    if (step < std::max(1, x.top_step())) throw ValidationError("sum step below the decomposition");
    Matrix total(static_cast<std::size_t>(step));
    for (const auto& term : x.terms()) {
      const auto& m = require_kind<Matrix>(term.element, ElementKind::matrix);
      for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) total(i, j) += m(i, j);
      }
    }
    return total;
  };
  out.sample = [](int step, double norm, double bound, Rng& rng) -> StepElement {
    const auto n = static_cast<std::size_t>(step);
    std::vector<Complex> entries(n * n);
    for (auto& e : entries) e = rng.complex_box();
    return rescale(Matrix(n, std::move(entries)), norm, bound,
                   [](const Matrix& m) { return lie::compatible_norm(m); });
  };
  return out;
}

DirectLimit dirichlet_limit(double s0, std::size_t coeff_dim) {
  if (!std::isfinite(s0)) throw ValidationError("abscissa must be finite");
  if (coeff_dim == 0) throw ValidationError("coefficient dimension must be positive");
  auto abscissa = [s0](int step) { return dirichlet::HalfPlane(s0 + (step - 1)); };
  DirectLimit out;
  out.kind = ElementKind::dirichlet;
  out.name = "dirichlet";
  out.step_norm = [abscissa, coeff_dim](int step, const StepElement& x) {
    const auto& g = require_kind<DirichletSeries>(x, ElementKind::dirichlet);
    if (step < 1) throw ValidationError("step indices start at 1");
    if (g.dim() != coeff_dim) throw ValidationError("series has the wrong coefficient dimension");
    return dirichlet::norm_s(g, abscissa(step));
  };
  out.sum = [coeff_dim](const StepDecomposition& x, int step) -> StepElement {
    if (step < std::max(1, x.top_step())) throw ValidationError("sum step below the decomposition");
    DirichletSeries total(coeff_dim);
    for (const auto& term : x.terms()) total += require_kind<DirichletSeries>(term.element, ElementKind::dirichlet);
    return total;
  };
  out.sample = [abscissa, coeff_dim](int step, double norm, double bound, Rng& rng) -> StepElement {
    DirichletSeries g(coeff_dim);
    const auto count = rng.uniform_int(1, 4);
    for (std::int64_t t = 0; t < count; ++t) {
      std::vector<Complex> entries(coeff_dim * coeff_dim);
      for (auto& e : entries) e = rng.complex_box();
      g.add_term(static_cast<dirichlet::Frequency>(rng.uniform_int(1, 16)), Matrix(coeff_dim, std::move(entries)));
    }
    const auto s = abscissa(step);
    return rescale(std::move(g), norm, bound, [s](const DirichletSeries& x) { return dirichlet::norm_s(x, s); });
  };
  return out;
}

DirectLimit germ_limit(std::size_t dim, int degree) {
  const auto anchors = germ::AnchorSet::origin(dim);
  const auto basis = germ::MonomialBasis::get(dim, degree);
  DirectLimit out;
  out.kind = ElementKind::germ;
  out.name = "germs";
  out.step_norm = [](int step, const StepElement& x) {
    const auto& g = require_kind<Germ>(x, ElementKind::germ);
    if (g.index() != step) throw ValidationError("step " + std::to_string(step) + " holds germs of that index");
    return germ::sup_norm(g);
  };
  out.sum = [anchors, degree](const StepDecomposition& x, int step) -> StepElement {
    if (step < std::max(1, x.top_step())) throw ValidationError("sum step below the decomposition");
    Germ total = Germ::zero(anchors, step, degree);
    for (const auto& term : x.terms()) total += require_kind<Germ>(term.element, ElementKind::germ).restricted(step);
    return total;
  };
  out.sample = [anchors, basis, degree](int step, double norm, double bound, Rng& rng) -> StepElement {
    germ::GermBuilder builder(anchors, step, degree);
    const auto count = rng.uniform_int(1, 4);
    for (std::int64_t t = 0; t < count; ++t) {
      const auto i = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(basis->size()) - 1));
      CVector coeff(anchors.dim());
      for (auto& c : coeff) c = rng.complex_box();
      builder.term(0, basis->exponent(i), coeff);
    }
    return rescale(builder.build(), norm, bound, [](const Germ& g) { return germ::sup_norm(g); });
  };
  return out;
}

bool neighborhood_contains(const DirectLimit& limit, std::span<const double> delta, const StepDecomposition& x) {
  for (const auto& term : x.terms()) {
    if (static_cast<std::size_t>(term.step) > delta.size()) {
      throw ValidationError("decomposition uses step " + std::to_string(term.step) + " but only " +
                            std::to_string(delta.size()) + " radii are given");
    }
    if (!(limit.step_norm(term.step, term.element) < delta[static_cast<std::size_t>(term.step) - 1])) return false;
  }
  return true;
}

ContinuityCertificate build_certificate(std::vector<double> step_sups, double R, double r, double epsilon) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R must be positive and finite");
  if (!(r > 0.0)) throw ValidationError("r must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive and finite");
  if (step_sups.empty() || step_sups.size() > kMaxCertificateSteps) {
    throw ValidationError("certificate needs between 1 and " + std::to_string(kMaxCertificateSteps) + " steps");
  }
  for (double s : step_sups) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("step sups must be finite and nonnegative");
  }
  const double limit = R / (2.0 * std::numbers::e);
  if (!(r < limit)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "certificate requires r < R/(2e) = " << limit << ", got r = " << r;
    throw DomainError(msg.str());
  }

  ContinuityCertificate cert;
  cert.R = R;
  cert.r = r;
  cert.epsilon = epsilon;
  cert.step_sups = std::move(step_sups);
  for (std::size_t i = 0; i < cert.step_sups.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double a = std::ldexp(r, -n);
    const double b = std::min(1.0, epsilon / std::ldexp(cert.step_sups[i], n));
    cert.a.push_back(a);
    cert.b.push_back(b);
    cert.delta.push_back(a * b);
  }
  if (!certificate_consistent(cert)) throw InternalError("freshly built certificate violates its invariants");
  return cert;
}

bool certificate_consistent(const ContinuityCertificate& cert) {
  const std::size_t n = cert.step_sups.size();
  if (n == 0 || cert.a.size() != n || cert.b.size() != n || cert.delta.size() != n) return false;
  if (!(cert.r < cert.R / (2.0 * std::numbers::e))) return false;
  double partial = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int step = static_cast<int>(i) + 1;
    const double a = std::ldexp(cert.r, -step);
    const double b = std::min(1.0, cert.epsilon / std::ldexp(cert.step_sups[i], step));
    if (cert.a[i] != a || cert.b[i] != b || cert.delta[i] != a * b) return false;
    if (!(cert.delta[i] <= cert.a[i])) return false;
    partial += cert.delta[i];
    if (!(partial < cert.r)) return false;
  }
  return true;
}

std::vector<double> step_sups(const LimitMap& f, int steps, double R, double r) {
  if (steps < 1) throw ValidationError("need at least one step");
  const double factor = R / (R - 2.0 * std::numbers::e * r);
  if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("step sups require r < R/(2e)");
  std::vector<double> out;
  for (int n = 1; n <= steps; ++n) out.push_back(factor * f.step_sup(n, R));
  return out;
}

LimitMap zero_map(ElementKind kind) {
  return {kind, "zero", [](const StepElement&) { return 0.0; }, [](int, double) { return 0.0; }};
}

LimitMap matrix_polynomial_map(std::vector<Complex> coeffs, bool weighted) {
  if (coeffs.empty()) throw ValidationError("polynomial map needs at least one coefficient");
  LimitMap out;
  out.kind = ElementKind::matrix;
  out.name = weighted ? "weighted-matrix-polynomial" : "matrix-polynomial";
  out.output_norm = [coeffs, weighted](const StepElement& x) {
    Matrix y = require_kind<Matrix>(x, ElementKind::matrix);
    if (weighted) {
      for (std::size_t i = 0; i < y.dim(); ++i) {
        for (std::size_t j = 0; j < y.dim(); ++j) y(i, j) *= static_cast<double>(i + 1);
      }
    }
    // y (c_1 + y (c_2 + ... + y c_K))
    const Matrix eye = Matrix::identity(y.dim());
    Matrix acc = coeffs.back() * eye;
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = coeffs[k] * eye + y * acc;
    return lie::compatible_norm(y * acc);
  };
  out.step_sup = [coeffs, weighted](int step, double R) {
    const double gain = weighted ? static_cast<double>(step) * R : R;
    double total = 0.0;
    double power = 1.0;
    for (Complex c : coeffs) {
      power *= gain;
      total += std::abs(c) * power;
    }
    return total;
  };
  return out;
}

LimitMap dirichlet_bracket_map(DirichletSeries gamma0, double s0, double s_out) {
  const dirichlet::HalfPlane out_plane(s_out);
  const double gain = dirichlet::norm_s(gamma0, out_plane);
  LimitMap out;
  out.kind = ElementKind::dirichlet;
  out.name = "dirichlet-bracket";
  out.output_norm = [gamma0, out_plane](const StepElement& x) {
    return dirichlet::norm_s(dirichlet::bracket(gamma0, require_kind<DirichletSeries>(x, ElementKind::dirichlet)),
                             out_plane);
  };
  out.step_sup = [gain, s0, s_out](int step, double R) {
    if (s0 + (step - 1) > s_out) throw ValidationError("bracket map output abscissa lies below a step abscissa");
    return gain * R;
  };
  return out;
}

LimitMap germ_scaling_map(Complex c, int out_index) {
  if (out_index < 1) throw ValidationError("output index must be >= 1");
  LimitMap out;
  out.kind = ElementKind::germ;
  out.name = "germ-scaling";
  out.output_norm = [c, out_index](const StepElement& x) {
    return std::abs(c) * germ::sup_norm(require_kind<Germ>(x, ElementKind::germ).restricted(out_index));
  };
  out.step_sup = [c, out_index](int step, double R) {
    if (step > out_index) throw ValidationError("germ map output index lies below a step");
    return std::abs(c) * R;
  };
  return out;
}

VerifyReport verify_certificate(const DirectLimit& limit, const LimitMap& f, const ContinuityCertificate& cert,
                                std::size_t samples, std::uint64_t seed) {
  if (f.kind != limit.kind) {
    throw ConfigurationError("map acts on " + std::string(kind_name(f.kind)) + " elements but the limit holds " +
                             std::string(kind_name(limit.kind)) + " elements");
  }
  const std::size_t steps = cert.delta.size();
  if (steps == 0) throw ValidationError("certificate has no steps");
  if (f.output_norm(limit.sum(StepDecomposition{}, 1)) != 0.0) {
    throw ValidationError("the map must satisfy f(0) = 0");
  }

  VerifyReport report;
  report.epsilon = cert.epsilon;
  report.samples = samples;
  report.seed = seed;
  report.certificate_consistent = certificate_consistent(cert);

  const Rng root(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = root.split(i);
    const int m = static_cast<int>(rng.uniform_int(1, static_cast<std::int64_t>(steps)));
    StepDecomposition x;
    double norm_total = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double bound = cert.delta[static_cast<std::size_t>(j) - 1];
      StepElement element = limit.sample(j, rng.uniform() * bound, bound, rng);
      norm_total += limit.step_norm(j, element);
      x.add(j, std::move(element));
    }
    if (!neighborhood_contains(limit, cert.delta, x)) throw InternalError("sampler left the neighborhood V(delta)");
    if (!(norm_total < cert.r)) {
      if (report.certificate_consistent) {
        throw InternalError("sample escaped the ball of radius r although sum delta_j < r");
      }
      ++report.radius_breaches;
      ++report.violations;
    }
    const double value = f.output_norm(limit.sum(x, m));
    report.max_observed = std::max(report.max_observed, value);
    if (!(value < cert.epsilon)) ++report.violations;
  }
  report.margin = cert.epsilon - report.max_observed;
  report.verdict = report.violations == 0;
  return report;
}

double inverse_square_tail(std::uint64_t n0) {
  return boost::math::trigamma(static_cast<double>(n0) + 1.0);
}

DirichletModulus dirichlet_regularity_modulus(int s, double epsilon, int u) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive and finite");
  const int t = s + 2;
  if (u < t) throw ValidationError("u must be >= s + 2 = " + std::to_string(t));

  const double target = epsilon / 4.0;
  std::uint64_t n0 = 1;
  if (!(inverse_square_tail(1) < target)) {
    constexpr std::uint64_t kCap = std::uint64_t{1} << 52;
    std::uint64_t hi = 2;
    while (!(inverse_square_tail(hi) < target)) {
      if (hi >= kCap) throw ValidationError("epsilon too small for the tail search");
      hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // tail(lo) >= target
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (inverse_square_tail(mid) < target ? hi : lo) = mid;
    }
    n0 = hi;
  }

  DirichletModulus out;
  out.s = s;
  out.t = t;
  out.u = u;
  out.epsilon = epsilon;
  out.n0 = n0;
  out.tail = inverse_square_tail(n0);
  out.delta = std::pow(static_cast<double>(n0), t - u) * epsilon / 2.0;
  return out;
}

ModulusCheck check_dirichlet_modulus(const DirichletModulus& modulus, const DirichletSeries& g) {
  const double ns = dirichlet::norm_s(g, dirichlet::HalfPlane(modulus.s));
  const double nu = dirichlet::norm_s(g, dirichlet::HalfPlane(modulus.u));
  ModulusCheck out;
  out.hypotheses = ns < 2.0 && nu < modulus.delta;
  out.observed = dirichlet::norm_s(g, dirichlet::HalfPlane(modulus.t));
  out.bound = std::pow(static_cast<double>(modulus.n0), modulus.u - modulus.t) * nu + ns * modulus.tail;
  out.holds = !out.hypotheses || out.observed < modulus.epsilon;
  return out;
}

DegreeSups DegreeSups::finite(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("degree sups must be finite and nonnegative");
  }
  DegreeSups out;
  out.values_ = std::move(values);
  return out;
}

DegreeSups DegreeSups::geometric(double c, double w) {
  if (!(c >= 0.0) || !std::isfinite(c) || !(w >= 0.0) || !std::isfinite(w)) {
    throw ValidationError("geometric degree sups need finite nonnegative c and w");
  }
  DegreeSups out;
  out.geometric_ = true;
  out.c_ = c;
  out.w_ = w;
  return out;
}

DegreeSups DegreeSups::unit_ball_budget(int n) {
  if (n < 1) throw ValidationError("index must be >= 1");
  return geometric(2.0, n);
}

double DegreeSups::operator()(int k) const {
  if (k < 1) throw ValidationError("degree sups start at k = 1");
  if (geometric_) return c_ * std::pow(w_, k);
  const auto i = static_cast<std::size_t>(k) - 1;
  return i < values_.size() ? values_[i] : 0.0;
}

double DegreeSups::tail_after(int k0, double rho) const {
  if (k0 < 0 || !(rho >= 0.0)) throw ValidationError("tail needs k0 >= 0 and rho >= 0");
  if (geometric_) {
    const double q = w_ * rho;
    if (c_ == 0.0) return 0.0;
    if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
    return c_ * std::pow(q, k0 + 1) / (1.0 - q);
  }
  double total = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k0); i < values_.size(); ++i) {
    total += values_[i] * std::pow(rho, static_cast<double>(i) + 1.0);
  }
  return total;
}

double germ_modulus_constant() { return 3.0 / (3.0 - std::numbers::e); }

GermModulus germ_regularity_modulus(int n, double epsilon, int l, const DegreeSups& sups) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive and finite");
  if (l < 6 * n) throw ValidationError("l must be >= 6n = " + std::to_string(6 * n));

  GermModulus out;
  out.n = n;
  out.m = 6 * n;
  out.l = l;
  out.epsilon = epsilon;
  out.D = germ_modulus_constant();
  out.sups = sups;
  const double rho = 1.0 / (6.0 * n);
  constexpr int kMaxCutoff = 100000;
  int k0 = 1;
  while (!(sups.tail_after(k0, rho) < epsilon / 2.0)) {
    if (++k0 > kMaxCutoff) throw DomainError("degree sups do not decay fast enough on the ball of radius 1/(6n)");
  }
  out.k0 = k0;
  out.tail = sups.tail_after(k0, rho);
  out.delta = (1.0 / out.D) * std::pow(static_cast<double>(n) / l, k0) * epsilon / 2.0;
  return out;
}

double germ_chain_bound(const GermModulus& modulus, double x) {
  return std::pow(static_cast<double>(modulus.l) / modulus.n, modulus.k0) * modulus.D * x + modulus.epsilon / 2.0;
}

ModulusCheck check_germ_modulus(const GermModulus& modulus, const Germ& g) {
  if (g.index() > modulus.n) throw ValidationError("germ is not defined on U_n for the modulus index");
  bool within_sups = true;
  for (std::size_t a = 0; a < g.anchors().size(); ++a) {
    for (const auto& s : g.at(a)) {
      for (int k = 1; k <= g.degree(); ++k) within_sups = within_sups && s.degree_abs_sum(k) <= modulus.sups(k);
    }
  }
  const double at_n = germ::sup_norm(g.restricted(modulus.n));
  const double at_l = germ::sup_norm(g.restricted(modulus.l));
  ModulusCheck out;
  out.hypotheses = within_sups && at_n < 2.0 && at_l < modulus.delta;
  out.observed = germ::sup_norm(g.restricted(modulus.m));
  out.bound = germ_chain_bound(modulus, at_l);
  out.holds = !out.hypotheses || out.observed <= modulus.epsilon;
  return out;
}

}  // namespace lbcalc::limit
