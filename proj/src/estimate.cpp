#include "lbcalc/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "lbcalc/error.hpp"
#include "lbcalc/random.hpp"

namespace lbcalc::estimate {

namespace {

void require_finite_vector(const CVector& v, const char* what) {
  for (Complex c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError(std::string(what) + " is not finite");
  }
}

std::vector<CVector> probe_directions(std::size_t d, Rng rng) {
  std::vector<CVector> out;
  for (std::size_t i = 0; i < d; ++i) {
    CVector e(d, Complex{});
    e[i] = 1.0;
    out.push_back(std::move(e));
  }
  for (std::size_t p = 0; p < 2 * d; ++p) {
    CVector v(d);
    for (auto& c : v) c = rng.unit_phase();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<AnalyticSample> samples_from_germ(const germ::Germ& gamma) {
  std::vector<AnalyticSample> out;
  const double sup = germ::sup_norm(gamma);
  for (std::size_t a = 0; a < gamma.anchors().size(); ++a) {
    std::vector<double> sups(static_cast<std::size_t>(gamma.degree()) + 1, 0.0);
    for (int k = 1; k <= gamma.degree(); ++k) {
      for (const auto& s : gamma.at(a)) sups[k] = std::max(sups[k], s.degree_abs_sum(k));
    }
    AnalyticSample sample;
    sample.evaluator = [gamma](const CVector& x) { return gamma.evaluate(x); };
    sample.center = gamma.anchors()[a];
    sample.radius = gamma.radius();
    sample.sup_bound = sup;
    sample.degree_sups = std::move(sups);
    out.push_back(std::move(sample));
  }
  return out;
}

CVector cauchy_directional_coefficient(const AnalyticSample& f, const CVector& v, double s, int k, int nodes) {
  if (!f.evaluator) throw ValidationError("analytic sample has no evaluator");
  if (v.size() != f.center.size()) throw ValidationError("direction has the wrong dimension");
  require_finite_vector(v, "direction");
  if (std::abs(germ::max_norm(v) - 1.0) > 1e-12) throw ValidationError("direction must have unit max norm");
  if (k < 0) throw ValidationError("coefficient degree must be nonnegative");
  if (nodes < 1) throw ValidationError("quadrature needs at least one node");
  if (!(s > 0.0)) throw ValidationError("contour radius must be positive");
  if (!(s < f.radius)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "contour radius s = " << s << " must be < R = " << f.radius;
    throw DomainError(msg.str());
  }

  const std::size_t d = v.size();
  CVector sum(d, Complex{});
  CVector point(d);
  for (int q = 0; q < nodes; ++q) {
    const double theta = 2.0 * std::numbers::pi * q / nodes;
    const Complex z = std::polar(s, theta);
    for (std::size_t i = 0; i < d; ++i) point[i] = f.center[i] + z * v[i];
    const CVector value = f.evaluator(point);
    if (value.size() != d) throw ValidationError("evaluator returned a vector of the wrong dimension");
    // z^{-k} = s^{-k} e^{-i k theta}
    const Complex weight = std::polar(std::pow(s, -k), -static_cast<double>(k) * theta);
    for (std::size_t i = 0; i < d; ++i) sum[i] += value[i] * weight;
  }
  for (auto& c : sum) c /= static_cast<double>(nodes);
  return sum;
}

Polarization polarization_factor(int k) {
  if (k < 0) throw ValidationError("polarization degree must be nonnegative");
  double factor = 1.0;
  for (int i = 1; i <= k; ++i) factor *= 2.0 * k / i;
  return {factor, std::pow(2.0 * std::numbers::e, k)};
}

bool polarization_within_bound(int k) {
  using boost::multiprecision::cpp_int;
  if (k < 0) throw ValidationError("polarization degree must be nonnegative");
  // e_lo = sum_{i <= 20} 1/i! < e, as num/den with den = 20!.
  cpp_int den = 1;
  for (int i = 2; i <= 20; ++i) den *= i;
  cpp_int num = 0;
  cpp_int term = den;
  for (int i = 0; i <= 20; ++i) {
    if (i > 0) term /= i;
    num += term;
  }
  // (2k)^k / k! <= (2 e_lo)^k  <=>  k^k den^k <= num^k k!
  cpp_int fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  cpp_int lhs = boost::multiprecision::pow(cpp_int(k), static_cast<unsigned>(k)) *
                boost::multiprecision::pow(den, static_cast<unsigned>(k));
  cpp_int rhs = boost::multiprecision::pow(num, static_cast<unsigned>(k)) * fact;
  return lhs <= rhs;
}

EstimateReport verify_bounded_series(const std::vector<AnalyticSample>& family, double r,
                                     const EstimateOptions& options) {
  if (family.empty()) throw ValidationError("verify_bounded_series needs a nonempty family");
  if (options.degree < 0) throw ValidationError("truncation degree must be nonnegative");
  if (!(options.radius_gap > 0.0 && options.radius_gap < 1.0)) throw ValidationError("radius gap must lie in (0, 1)");
  const double big_r = family.front().radius;
  if (!(big_r > 0.0) || !std::isfinite(big_r)) throw ValidationError("radius must be positive and finite");
  for (const auto& f : family) {
    if (f.radius != big_r) throw ValidationError("all samples in a family must share the radius R");
    if (!(f.sup_bound >= 0.0)) throw ValidationError("sup bound must be nonnegative");
    require_finite_vector(f.center, "center");
  }
  if (!(r > 0.0)) throw ValidationError("r must be positive");
  const double limit = big_r / (2.0 * std::numbers::e);
  if (!(r < limit)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "r = " << r << " must be < R/(2e) = " << limit;
    throw DomainError(msg.str());
  }

  const double s = big_r * (1.0 - options.radius_gap);
  const auto top = static_cast<std::size_t>(options.degree);
  std::vector<double> degrees(top + 1, 0.0);
  double sup = 0.0;
  const Rng root(options.seed);
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const auto& f = family[idx];
    sup = std::max(sup, f.sup_bound);
    if (f.degree_sups) {
      const auto& known = *f.degree_sups;
      for (std::size_t k = 0; k <= top && k < known.size(); ++k) degrees[k] = std::max(degrees[k], known[k]);
      continue;
    }
    const auto directions = probe_directions(f.center.size(), root.split(idx));
    for (std::size_t k = 0; k <= top; ++k) {
      double best = 0.0;
      for (const auto& v : directions) {
        const CVector c = cauchy_directional_coefficient(f, v, s, static_cast<int>(k), options.nodes);
        best = std::max(best, germ::max_norm(c));
      }
      degrees[k] = std::max(degrees[k], polarization_factor(static_cast<int>(k)).factor * best);
    }
  }

  EstimateReport report;
  report.degrees = degrees;
  double power = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k <= top; ++k) {
    total += degrees[k] * power;
    report.partial_sums.push_back(total);
    power *= r;
  }
  report.lhs = total;
  report.rhs = big_r / (big_r - 2.0 * std::numbers::e * r) * sup;
  report.verdict = report.lhs <= report.rhs + 1e-12;
  report.R = big_r;
  report.r = r;
  report.s = s;
  report.Q = options.nodes;
  return report;
}

}  // namespace lbcalc::estimate
