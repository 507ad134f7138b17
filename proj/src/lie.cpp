#include "lbcalc/lie.hpp"

#include <cmath>
#include <sstream>

#include "lbcalc/bch_recursion.hpp"
#include "lbcalc/error.hpp"

namespace lbcalc::lie {

namespace {

// Denman-Beavers iteration for the principal square root.
Matrix sqrt_near_identity(const Matrix& a) {
  Matrix y = a;
  Matrix z = Matrix::identity(a.dim());
  for (int it = 0; it < 100; ++it) {
    const Matrix y_next = 0.5 * (y + inverse(z));
    const Matrix z_next = 0.5 * (z + inverse(y));
    const double change = norm_one(y_next - y);
    y = y_next;
    z = z_next;
    if (change <= 1e-17 * norm_one(y)) break;
  }
  return y;
}

}  // namespace

double CompatibleNorm::operator()(const Matrix& x) const {
  if (!x.is_finite()) throw ValidationError("matrix has non-finite entries");
  return scale * norm_one(x);
}

double bch_input_bound() { return std::log(1.5); }
double bch_output_bound() { return std::log(2.0); }

double compatible_norm(const Matrix& x) { return kCompatibleNorm(x); }

Matrix mat_exp(const Matrix& x) {
  if (!x.is_finite()) throw ValidationError("matrix has non-finite entries");
  const double norm = norm_one(x);
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Matrix scaled = std::ldexp(1.0, -squarings) * x;

  Matrix result = Matrix::identity(x.dim());
  Matrix term = Matrix::identity(x.dim());
  for (int k = 1; k <= 30; ++k) {
    term = (1.0 / k) * (term * scaled);
    result += term;
    if (norm_one(term) <= 1e-18 * norm_one(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix mat_log(const Matrix& g) {
  if (!g.is_finite()) throw ValidationError("matrix has non-finite entries");
  const Matrix id = Matrix::identity(g.dim());

  // Guaranteed for |g - I|_1 < 1; beyond that the square roots are tried and
  // a failure to approach I means g has no principal logarithm here.
  Matrix a = g;
  int roots = 0;
  try {
    while (norm_one(a - id) > 0.05) {
      if (++roots > 64) throw DomainError("square roots do not approach I");
      a = sqrt_near_identity(a);
      if (!a.is_finite()) throw DomainError("square root iteration diverged");
    }
  } catch (const DomainError&) {
    std::ostringstream msg;
    msg << "mat_log requires |g - I|_1 < 1 or a spectrum off the closed negative axis; |g - I|_1 = "
        << norm_one(g - id);
    throw DomainError(msg.str());
  }

  // log a = 2 atanh(t), t = (a - I)(a + I)^{-1}
  const Matrix t = (a - id) * inverse(a + id);
  const Matrix t2 = t * t;
  Matrix power = t;
  Matrix sum = t;
  for (int k = 3; k < 60; k += 2) {
    power = power * t2;
    const Matrix term = (1.0 / k) * power;
    sum += term;
    if (norm_one(term) <= 1e-18 * norm_one(sum)) break;
  }
  return std::ldexp(2.0, roots) * sum;
}

Matrix bch(const Matrix& x, const Matrix& y, int order) {
  if (x.dim() != y.dim()) throw ValidationError("bch arguments differ in dimension");
  const double norm_sum = compatible_norm(x) + compatible_norm(y);
  if (!(norm_sum < bch_input_bound())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bch requires |x| + |y| < log(3/2) = " << bch_input_bound() << ", got " << norm_sum;
    throw DomainError(msg.str());
  }
  const auto parts = detail::bch_components(x, y, order, commutator);
  Matrix result = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) result += parts[i];

  const double out = compatible_norm(result);
  if (!(out < bch_output_bound())) {
    std::ostringstream msg;
    msg << "bch output norm " << out << " is not below log 2";
    throw InternalError(msg.str());
  }
  return result;
}

}  // namespace lbcalc::lie
