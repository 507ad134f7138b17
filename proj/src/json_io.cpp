#include "lbcalc/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lbcalc/error.hpp"

namespace lbcalc::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
  return v;
}

long long integer(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

std::size_t positive_size(const json& j, const char* what) {
  const long long v = integer(j, what);
  if (v <= 0) throw ValidationError(std::string(what) + " must be positive");
  return static_cast<std::size_t>(v);
}

const json& array(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  return j;
}

CVector vector_from_json(const json& j, std::size_t dim, const char* what) {
  array(j, what);
  if (j.size() != dim) throw ValidationError(std::string(what) + " must have " + std::to_string(dim) + " entries");
  CVector out;
  for (const auto& c : j) out.push_back(complex_from_json(c));
  return out;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Complex c : v) out.push_back(to_json(c));
  return out;
}

std::vector<double> doubles_from_json(const json& j, const char* what) {
  array(j, what);
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

}  // namespace

json to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {number(j, "complex value"), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError("complex values are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const Matrix& m) {
  json entries = json::array();
  for (Complex c : m.entries()) entries.push_back(to_json(c));
  return {{"dim", m.dim()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t dim = positive_size(field(j, "dim"), "dim");
  const json& entries = array(field(j, "entries"), "entries");
  if (entries.size() != dim * dim) {
    throw ValidationError("matrix of dim " + std::to_string(dim) + " needs " + std::to_string(dim * dim) +
                          " entries, got " + std::to_string(entries.size()));
  }
  std::vector<Complex> values;
  values.reserve(entries.size());
  for (const auto& e : entries) values.push_back(complex_from_json(e));
  return Matrix(dim, std::move(values));
}

json to_json(const dirichlet::DirichletSeries& g) {
  json terms = json::array();
  for (const auto& [n, a] : g.terms()) terms.push_back({{"n", n}, {"coeff", to_json(a)}});
  return {{"dim", g.dim()}, {"terms", terms}};
}

dirichlet::DirichletSeries series_from_json(const json& j) {
  const std::size_t dim = positive_size(field(j, "dim"), "dim");
  dirichlet::DirichletSeries out(dim);
  long long previous = 0;
  for (const auto& term : array(field(j, "terms"), "terms")) {
    const long long n = integer(field(term, "n"), "frequency n");
    if (n < 1) throw ValidationError("frequencies start at 1");
    if (n <= previous) throw ValidationError("series terms must be strictly increasing in n");
    previous = n;
    const Matrix a = matrix_from_json(field(term, "coeff"));
    if (a.dim() != dim) throw ValidationError("coefficient dimension does not match the series dim");
    out.add_term(static_cast<dirichlet::Frequency>(n), a);
  }
  return out;
}

json to_json(const germ::Germ& g) {
  json anchors = json::array();
  for (const auto& p : g.anchors().points()) anchors.push_back(vector_to_json(p));
  json series = json::array();
  const auto& basis = *g.basis();
  for (std::size_t a = 0; a < g.anchors().size(); ++a) {
    json terms = json::array();
    for (std::size_t i = 1; i < basis.size(); ++i) {
      CVector coeff(g.dim());
      bool nonzero = false;
      for (std::size_t k = 0; k < g.dim(); ++k) {
        coeff[k] = g.component(a, k)[i];
        nonzero = nonzero || coeff[k] != Complex{};
      }
      if (nonzero) terms.push_back({{"alpha", basis.exponent(i)}, {"coeff", vector_to_json(coeff)}});
    }
    series.push_back({{"anchor", a}, {"terms", terms}});
  }
  return {{"dim", g.dim()}, {"index", g.index()}, {"degree", g.degree()}, {"anchors", anchors}, {"series", series}};
}

germ::Germ germ_from_json(const json& j) {
  const std::size_t dim = positive_size(field(j, "dim"), "dim");
  const long long index = integer(field(j, "index"), "index");
  if (index < 1 || index > std::numeric_limits<int>::max() / 12) throw ValidationError("index out of range");
  const long long degree = j.contains("degree") ? integer(j["degree"], "degree") : germ::kDefaultDegree;
  if (degree < 1 || degree > 24) throw ValidationError("degree out of range");
  std::vector<CVector> points;
  for (const auto& p : array(field(j, "anchors"), "anchors")) points.push_back(vector_from_json(p, dim, "anchor"));
  germ::GermBuilder builder(germ::AnchorSet(dim, std::move(points)), static_cast<int>(index), static_cast<int>(degree));
  for (const auto& block : array(field(j, "series"), "series")) {
    const long long anchor = integer(field(block, "anchor"), "anchor");
    if (anchor < 0) throw ValidationError("anchor index must be nonnegative");
    for (const auto& term : array(field(block, "terms"), "terms")) {
      std::vector<int> alpha;
      for (const auto& e : array(field(term, "alpha"), "alpha")) {
        const long long v = integer(e, "exponent");
        if (v < 0 || v > 24) throw ValidationError("exponent out of range");
        alpha.push_back(static_cast<int>(v));
      }
      if (alpha.size() != dim) throw ValidationError("multi-index has the wrong length");
      int total = 0;
      for (int v : alpha) total += v;
      if (total == 0) throw ValidationError("germs have no constant term");
      const CVector coeff = vector_from_json(field(term, "coeff"), dim, "coefficient");
      builder.term(static_cast<std::size_t>(anchor), alpha, coeff);
    }
  }
  return builder.build();
}

json to_json(const estimate::EstimateReport& report) {
  return {{"degrees", report.degrees},
          {"partial_sums", report.partial_sums},
          {"lhs", report.lhs},
          {"rhs", report.rhs},
          {"verdict", report.verdict},
          {"parameters", {{"R", report.R}, {"r", report.r}, {"s", report.s}, {"Q", report.Q}}}};
}

json to_json(const limit::ContinuityCertificate& cert) {
  return {{"R", cert.R},           {"r", cert.r}, {"epsilon", cert.epsilon}, {"step_sups", cert.step_sups},
          {"a", cert.a},           {"b", cert.b}, {"delta", cert.delta}};
}

limit::ContinuityCertificate certificate_from_json(const json& j) {
  limit::ContinuityCertificate cert;
  cert.R = number(field(j, "R"), "R");
  cert.r = number(field(j, "r"), "r");
  cert.epsilon = number(field(j, "epsilon"), "epsilon");
  cert.step_sups = doubles_from_json(field(j, "step_sups"), "step_sups");
  cert.a = doubles_from_json(field(j, "a"), "a");
  cert.b = doubles_from_json(field(j, "b"), "b");
  cert.delta = doubles_from_json(field(j, "delta"), "delta");
  const std::size_t n = cert.step_sups.size();
  if (n == 0 || cert.a.size() != n || cert.b.size() != n || cert.delta.size() != n) {
    throw ValidationError("certificate lists must be nonempty and of equal length");
  }
  for (double d : cert.delta) {
    if (!(d > 0.0)) throw ValidationError("certificate radii delta must be positive");
  }
  return cert;
}

json to_json(const limit::VerifyReport& report) {
  return {{"max_observed", report.max_observed},
          {"epsilon", report.epsilon},
          {"samples", report.samples},
          {"verdict", report.verdict},
          {"seed", report.seed},
          {"margin", report.margin},
          {"violations", report.violations},
          {"radius_breaches", report.radius_breaches},
          {"certificate_consistent", report.certificate_consistent}};
}

json to_json(const limit::DirichletModulus& modulus) {
  return {{"scale", "dirichlet"}, {"s", modulus.s},         {"t", modulus.t},         {"u", modulus.u},
          {"epsilon", modulus.epsilon}, {"n0", modulus.n0}, {"tail", modulus.tail}, {"delta", modulus.delta}};
}

json to_json(const limit::GermModulus& modulus) {
  json sups;
  if (modulus.sups.is_geometric()) {
    sups = {{"kind", "geometric"}, {"c", modulus.sups.c()}, {"w", modulus.sups.w()}};
  } else {
    sups = {{"kind", "finite"}, {"values", modulus.sups.values()}};
  }
  return {{"scale", "germ"},     {"n", modulus.n},   {"m", modulus.m},       {"l", modulus.l},
          {"epsilon", modulus.epsilon}, {"D", modulus.D}, {"k0", modulus.k0}, {"tail", modulus.tail},
          {"delta", modulus.delta}, {"degree_sups", sups}};
}

json to_json(const limit::ModulusCheck& check) {
  return {{"hypotheses", check.hypotheses}, {"observed", check.observed}, {"bound", check.bound}, {"holds", check.holds}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace lbcalc::io
