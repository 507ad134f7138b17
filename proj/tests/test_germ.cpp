#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lbcalc/error.hpp"
#include "lbcalc/germ.hpp"
#include "lbcalc/random.hpp"

using namespace lbcalc;
using germ::AnchorSet;
using germ::Germ;
using germ::GermBuilder;

namespace {

// scalar germ sum_k c_k x^k at the origin
Germ scalar(int index, std::initializer_list<std::pair<int, double>> terms, int degree = germ::kDefaultDegree) {
  GermBuilder b(AnchorSet::origin(1), index, degree);
  for (const auto& [k, c] : terms) b.term(0, {k}, {Complex(c)});
  return b.build();
}

Complex coeff(const Germ& g, int k, std::size_t anchor = 0, std::size_t j = 0) {
  const int alpha[] = {k};
  return g.component(anchor, j).coefficient(alpha);
}

double max_coeff_diff(const Germ& a, const Germ& b) {
  double out = 0.0;
  for (std::size_t p = 0; p < a.anchors().size(); ++p) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const auto x = a.component(p, j).coefficients();
      const auto y = b.component(p, j).coefficients();
      for (std::size_t i = 0; i < x.size(); ++i) out = std::max(out, std::abs(x[i] - y[i]));
    }
  }
  return out;
}

Germ random_germ(Rng& rng, const AnchorSet& anchors, int index, double target_d, int degree) {
  GermBuilder b(anchors, index, degree);
  const auto basis = germ::MonomialBasis::get(anchors.dim(), degree);
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    for (std::size_t i = 1; i < basis->size(); ++i) {
      CVector c(anchors.dim());
      for (auto& v : c) v = rng.complex_box() * std::pow(0.5, basis->total_degree(i));
      b.term(a, basis->exponent(i), c);
    }
  }
  const Germ raw = b.build();
  return (target_d / germ::d_norm(raw)) * raw;
}

}  // namespace

TEST_CASE("anchor sets") {
  CHECK(AnchorSet::origin(3).size() == 1);
  CHECK(std::isinf(AnchorSet::origin(2).min_distance()));
  const AnchorSet two(2, {{0.0, 0.0}, {3.0, Complex(0.0, 1.0)}});
  CHECK(two.min_distance() == 3.0);
  CHECK_THROWS_AS(AnchorSet(1, {{1.0}, {1.0}}), ValidationError);
  CHECK_THROWS_AS(AnchorSet(2, {{1.0}}), ValidationError);
  CHECK_THROWS_AS(AnchorSet(1, {}), ValidationError);
}

TEST_CASE("germ construction rules") {
  const AnchorSet close(1, {{0.0}, {1.0}});
  // balls of radius 1 around 0 and 1 overlap
  CHECK_THROWS_AS(Germ::zero(close, 1), ValidationError);
  CHECK_NOTHROW(Germ::zero(close, 3));
  CHECK_THROWS_AS(Germ::zero(AnchorSet::origin(1), 0), ValidationError);
  GermBuilder b(AnchorSet::origin(1), 1);
  CHECK_THROWS_AS(b.term(0, {0}, {Complex(1.0)}).build(), ValidationError);
}

TEST_CASE("evaluation and restriction") {
  const Germ g = scalar(2, {{1, 0.5}, {3, -1.0}});
  const Complex x{0.2, 0.1};
  CHECK(std::abs(g.evaluate(std::span<const Complex>(&x, 1))[0] - (0.5 * x - x * x * x)) < 1e-16);
  const Complex far{0.6, 0.0};
  CHECK_THROWS_AS(g.evaluate(std::span<const Complex>(&far, 1)), DomainError);

  const Germ r = g.restricted(5);
  CHECK(r.index() == 5);
  CHECK(coeff(r, 3) == Complex(-1.0));
  CHECK_THROWS_AS(g.restricted(1), ValidationError);

  const AnchorSet anchors(1, {{0.0}, {3.0}});
  GermBuilder b(anchors, 1);
  b.term(1, {2}, {Complex(1.0)});
  const Germ h = b.build();
  const Complex near_second{3.5, 0.0};
  // x - 3 = 0.5 at the second anchor
  CHECK(h.evaluate(std::span<const Complex>(&near_second, 1))[0] == Complex(0.25));
}

TEST_CASE("sup_norm examples") {
  CHECK(germ::sup_norm(Germ::zero(AnchorSet::origin(2), 3)) == 0.0);
  CHECK(germ::sup_norm(scalar(2, {{2, 1.0}})) == 0.25);
  CHECK(germ::sup_norm(scalar(4, {{3, -2.0}})) == doctest::Approx(2.0 / 64.0).epsilon(1e-15));

  GermBuilder b(AnchorSet::origin(2), 2);
  b.term(0, {1, 1}, {Complex(0.0, 3.0), Complex(0.0)});
  CHECK(germ::sup_norm(b.build()) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("d_norm examples") {
  CHECK(germ::d_norm(Germ::zero(AnchorSet::origin(1), 1)) == 0.0);
  CHECK(germ::d_norm(scalar(2, {{2, 1.0}})) == 1.0);

  // linear part: the max-norm operator norm is the largest row sum
  const Matrix a = Matrix::from_rows({{0.1, -0.2}, {0.05, Complex(0.0, 0.05)}});
  const Germ lin = Germ::linear(AnchorSet::origin(2), 1, a);
  CHECK(germ::d_norm(lin) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(germ::sup_norm(lin) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("sup <= d / n on random germs") {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform_int(0, 2));
    const int n = static_cast<int>(rng.uniform_int(1, 20));
    const Germ g = random_germ(rng, AnchorSet::origin(dim), n, rng.uniform(0.0, 5.0), 5);
    CHECK(germ::sup_norm(g) <= germ::d_norm(g) / n);
  }
}

TEST_CASE("composition index") {
  CHECK(germ::composition_index(1, 1) == 6);
  CHECK(germ::composition_index(3, 0) == 5);
  CHECK_THROWS_AS(germ::composition_index(0, 1), ValidationError);
}

TEST_CASE("compose examples") {
  const Germ g2 = scalar(5, {{2, 1.0}, {3, 0.5}});
  CHECK(germ::compose(Germ::zero(AnchorSet::origin(1), 1), g2) == g2);

  const Germ g1 = scalar(1, {{2, 0.3}, {4, -0.1}});
  CHECK(germ::compose(g1, Germ::zero(AnchorSet::origin(1), 3)) == g1.restricted(3));

  const Germ sq1 = scalar(1, {{2, 1.0}});
  const Germ sq2 = scalar(5, {{2, 1.0}});
  const Germ c = germ::compose(sq1, sq2);
  CHECK(c.index() == 5);
  CHECK(coeff(c, 1) == Complex{});
  CHECK(coeff(c, 2) == Complex(2.0));
  CHECK(coeff(c, 3) == Complex(2.0));
  CHECK(coeff(c, 4) == Complex(1.0));
  CHECK(coeff(c, 5) == Complex{});

  // (1 + 2/4) * 3 > 4
  CHECK_THROWS_AS(germ::compose(sq1, scalar(4, {{2, 1.0}})), DomainError);
}

TEST_CASE("compose agrees with evaluation of the composite map") {
  Rng rng(23);
  const AnchorSet anchors(2, {{0.0, 0.0}, {3.0, 0.0}});
  for (int trial = 0; trial < 10; ++trial) {
    const Germ g1 = random_germ(rng, anchors, 1, 0.3, 3);
    const Germ g2 = random_germ(rng, anchors, 5, 0.3, 3);
    const Germ c = germ::compose(g1, g2);
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      CVector x = anchors[a];
      x[0] += 0.01 * rng.complex_box();
      x[1] += 0.01 * rng.complex_box();
      CVector y = g2.evaluate(x);
      for (std::size_t i = 0; i < 2; ++i) y[i] += x[i];
      const CVector lhs = c.evaluate(x);
      const CVector inner = g1.evaluate(y);
      // truncation at degree 3 leaves O(0.01^4)
      for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(lhs[i] - (inner[i] + y[i] - x[i])) < 1e-7);
    }
  }
}

TEST_CASE("compose_derivative on linear germs") {
  const AnchorSet o = AnchorSet::origin(2);
  const Matrix a = Matrix::from_rows({{0.1, 0.0}, {0.02, -0.1}});
  const Matrix b = Matrix::from_rows({{0.0, 0.05}, {0.1, 0.0}});
  const Matrix da = Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}});
  const Matrix db = Matrix::from_rows({{0.0, -1.0}, {3.0, 0.5}});
  const Germ d = germ::compose_derivative(Germ::linear(o, 1, a), Germ::linear(o, 4, b), Germ::linear(o, 1, da),
                                          Germ::linear(o, 4, db));
  const Matrix expected = da * (b + Matrix::identity(2)) + a * db + db;
  CHECK(max_abs(d.linear_part(0) - expected) < 1e-16);
  for (std::size_t i = 3; i < d.basis()->size(); ++i) {
    CHECK(d.component(0, 0)[i] == Complex{});
    CHECK(d.component(0, 1)[i] == Complex{});
  }

  const Germ zero_dir = germ::compose_derivative(Germ::linear(o, 1, a), Germ::linear(o, 4, b), Germ::zero(o, 1),
                                                 Germ::zero(o, 4));
  CHECK(zero_dir.is_zero());
}

TEST_CASE("compose_derivative matches central differences") {
  const Germ g1 = scalar(1, {{2, 0.3}});
  const Germ g2 = scalar(5, {{2, 0.2}});
  const Germ d1 = scalar(1, {{2, 1.0}, {3, -0.5}});
  const Germ d2 = scalar(5, {{2, 0.7}});
  const double h = 1e-5;
  const Germ plus = germ::compose(g1 + Complex(h) * d1, g2 + Complex(h) * d2);
  const Germ minus = germ::compose(g1 - Complex(h) * d1, g2 - Complex(h) * d2);
  const Germ fd = Complex(1.0 / (2.0 * h)) * (plus - minus);
  const Germ exact = germ::compose_derivative(g1, g2, d1, d2);
  CHECK(max_coeff_diff(fd, exact) < 1e-8);
}

TEST_CASE("invert examples") {
  const Germ z = germ::invert(Germ::zero(AnchorSet::origin(2), 3));
  CHECK(z.index() == 36);
  CHECK(z.is_zero());

  const Germ inv = germ::invert(scalar(1, {{2, 0.1}}));
  CHECK(inv.index() == 12);
  // reversion of x + 0.1 x^2, minus the identity
  const double expected[] = {0.0, 0.0, -0.1, 0.02, -0.005, 0.0014};
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(coeff(inv, k) - expected[k]) < 1e-15);
  CHECK(germ::sup_norm(inv) <= 1.0 / 6.0);

  const Matrix a = Matrix::from_rows({{0.1, -0.2}, {0.05, 0.15}});
  const Germ lin = germ::invert(Germ::linear(AnchorSet::origin(2), 2, a));
  const Matrix oracle = inverse(Matrix::identity(2) + a) - Matrix::identity(2);
  CHECK(max_abs(lin.linear_part(0) - oracle) < 1e-15);
}

TEST_CASE("invert gates") {
  CHECK_THROWS_AS(germ::invert(scalar(1, {{1, 1.2}})), DomainError);
  CHECK_THROWS_AS(germ::invert(scalar(1, {{1, 0.6}})), DomainError);
  CHECK_NOTHROW(germ::invert(scalar(1, {{1, 0.5}})));
}

TEST_CASE("residual examples") {
  const AnchorSet anchors(1, {{0.0}, {3.0}});
  Rng rng(5);
  const Germ g = random_germ(rng, anchors, 1, 0.4, germ::kDefaultDegree);
  const Germ inv = germ::invert(g);
  const Germ res = germ::residual(g, inv);
  for (std::size_t a = 0; a < 2; ++a) {
    for (Complex c : res.component(a, 0).coefficients()) CHECK(std::abs(c) < 1e-12);
  }

  const Germ g2 = random_germ(rng, anchors, 12, 0.3, germ::kDefaultDegree);
  CHECK(germ::residual(Germ::zero(anchors, 1), g2) == g2);
  CHECK(germ::residual(g, Germ::zero(anchors, 12)) == g.restricted(12));
  CHECK_THROWS_AS(germ::residual(g, Germ::zero(anchors, 11)), ValidationError);
}

TEST_CASE("derivative bound examples") {
  const Germ g = scalar(1, {{1, 1.0}});
  REQUIRE(germ::sup_norm(g) == 1.0);
  CHECK(germ::derivative_bound(g, 0) == 2.0);
  CHECK(germ::derivative_bound(g, 1) == doctest::Approx(16.0 * std::numbers::e).epsilon(1e-14));
  CHECK(std::abs(germ::derivative_bound(g, 1) - 43.4925092553447) < 1e-12);
  const Germ zero = Germ::zero(AnchorSet::origin(1), 2);
  for (int l = 0; l < 5; ++l) CHECK(germ::derivative_bound(zero, l) == 0.0);
  CHECK_THROWS_AS(germ::derivative_bound(g, -1), ValidationError);
}

TEST_CASE("germ arithmetic requires matching shapes") {
  const Germ a = scalar(1, {{2, 1.0}});
  const Germ b = scalar(2, {{2, 1.0}});
  CHECK_THROWS_AS(a + b, ValidationError);
  CHECK((a - a).is_zero());
}
