#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "lbcalc/error.hpp"
#include "lbcalc/lie.hpp"
#include "lbcalc/random.hpp"

using namespace lbcalc;

namespace {

double dist(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

Matrix random_matrix(Rng& rng, std::size_t dim, double target_norm) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.complex_box();
  }
  return (target_norm / lie::compatible_norm(m)) * m;
}

}  // namespace

TEST_CASE("compatible norm on simple matrices") {
  CHECK(lie::compatible_norm(Matrix(3)) == 0.0);
  CHECK(lie::compatible_norm(Matrix::identity(2)) == 2.0);
  CHECK(lie::compatible_norm(Matrix::unit(2, 0, 1, 0.1)) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(lie::kCompatibleNorm(Matrix::identity(4)) == 2.0);

  // column sums, not row sums
  const Matrix m = Matrix::from_rows({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(lie::compatible_norm(m) == 4.0);
}

TEST_CASE("matrix constructors reject bad data") {
  CHECK_THROWS_AS(Matrix(0), ValidationError);
  CHECK_THROWS_AS(Matrix(2, {1.0, 2.0, 3.0}), ValidationError);
  CHECK_THROWS_AS(Matrix(1, {std::numeric_limits<double>::quiet_NaN()}), ValidationError);
  CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), ValidationError);
}

TEST_CASE("bracket inequality for the compatible norm") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    const Matrix x = random_matrix(rng, dim, rng.uniform(0.01, 3.0));
    const Matrix y = random_matrix(rng, dim, rng.uniform(0.01, 3.0));
    CHECK(lie::compatible_norm(commutator(x, y)) <=
          lie::compatible_norm(x) * lie::compatible_norm(y) * (1.0 + 1e-12));
  }
}

TEST_CASE("mat_exp closed forms") {
  CHECK(lie::mat_exp(Matrix(2)) == Matrix::identity(2));

  const Matrix d = lie::mat_exp(Matrix::diagonal({1.0, 2.0}));
  const double e = std::numbers::e;
  CHECK(std::abs(d(0, 0) - e) < 1e-14 * e);
  CHECK(std::abs(d(1, 1) - e * e) < 1e-14 * e * e);
  CHECK(d(0, 1) == Complex{});

  const Matrix n = Matrix::unit(2, 0, 1, 0.1);
  CHECK(dist(lie::mat_exp(n), Matrix::identity(2) + n) < 1e-16);
}

TEST_CASE("mat_log closed forms and domain") {
  CHECK(lie::mat_log(Matrix::identity(3)).is_zero());

  const Matrix l = lie::mat_log(Matrix::diagonal({std::numbers::e, 1.0}));
  CHECK(dist(l, Matrix::diagonal({1.0, 0.0})) < 1e-14);

  const Matrix n = Matrix::unit(2, 0, 1, 0.1);
  CHECK(dist(lie::mat_log(Matrix::identity(2) + n), n) < 1e-16);

  CHECK(dist(lie::mat_log(Matrix::diagonal({3.0, 1.0})), Matrix::diagonal({std::log(3.0), 0.0})) < 1e-14);
  CHECK_THROWS_AS(lie::mat_log(Matrix::diagonal({-1.0, 1.0})), DomainError);
  CHECK_THROWS_AS(lie::mat_log(Matrix::diagonal({0.0, 1.0})), DomainError);
}

TEST_CASE("mat_log inverts mat_exp near zero") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = random_matrix(rng, 3, rng.uniform(0.0, 0.6));
    CHECK(dist(lie::mat_log(lie::mat_exp(x)), x) < 1e-13);
  }
}

TEST_CASE("bch degenerate arguments") {
  const Matrix y = Matrix::from_rows({{0.01, 0.02}, {-0.03, Complex(0.0, 0.01)}});
  for (int order = 1; order <= 12; ++order) {
    CHECK(dist(lie::bch(Matrix(2), y, order), y) == 0.0);
    CHECK(dist(lie::bch(y, y, order), 2.0 * y) < 1e-17);
  }
}

TEST_CASE("bch second order example") {
  const Matrix x = Matrix::unit(2, 0, 1, 0.1);
  const Matrix y = Matrix::unit(2, 1, 0, 0.1);
  const Matrix expected = x + y + Matrix::diagonal({0.005, -0.005});
  CHECK(dist(lie::bch(x, y, 2), expected) < 1e-17);

  const Matrix oracle = lie::mat_log(lie::mat_exp(x) * lie::mat_exp(y));
  // order 2 leaves a third-order remainder of size ~ |x|^2 |y| / 12
  CHECK(dist(lie::bch(x, y, 2), oracle) < 2e-4);
  CHECK(dist(lie::bch(x, y, 12), oracle) < 1e-14);
}

TEST_CASE("bch converges to the logarithm oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const double budget = rng.uniform(0.05, 0.4);
    const double share = rng.uniform(0.1, 0.9);
    const Matrix x = random_matrix(rng, 3, budget * share);
    const Matrix y = random_matrix(rng, 3, budget * (1.0 - share));
    const Matrix z = lie::bch(x, y, 12);
    CHECK(lie::compatible_norm(z) < lie::bch_output_bound());
    const Matrix oracle = lie::mat_log(lie::mat_exp(x) * lie::mat_exp(y));
    // truncation error decays like budget^13
    CHECK(norm_one(z - oracle) <= 1e-12 + std::pow(budget / lie::bch_input_bound(), 13));
  }
}

TEST_CASE("bch domain gate and order range") {
  const Matrix x = Matrix::unit(2, 0, 0, 0.25);
  const Matrix y = Matrix::unit(2, 1, 1, 0.25);
  // 2 * 0.25 + 2 * 0.25 = 1 > log(3/2)
  try {
    (void)lie::bch(x, y, 4);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log(3/2)") != std::string::npos);
  }
  const Matrix small = Matrix::unit(2, 0, 1, 0.01);
  CHECK_THROWS_AS(lie::bch(small, small, 0), ValidationError);
  CHECK_THROWS_AS(lie::bch(small, small, 13), ValidationError);
  CHECK_THROWS_AS(lie::bch(small, Matrix(3), 2), ValidationError);
}

TEST_CASE("bch constants") {
  CHECK(lie::bch_input_bound() == std::log(1.5));
  CHECK(lie::bch_output_bound() == std::log(2.0));
}
