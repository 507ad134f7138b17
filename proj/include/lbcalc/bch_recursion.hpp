#pragma once

// Homogeneous Baker-Campbell-Hausdorff components by the Varadarajan
// recursion, generic over any Lie algebra whose elements support `+`, `-`,
// and scaling by `double`:
//
//   Z_1 = x + y
//   (n+1) Z_{n+1} = 1/2 [x - y, Z_n]
//                 + sum_{p >= 1, 2p <= n} B_{2p}/(2p)!
//                     sum_{k_1 + ... + k_{2p} = n} [Z_{k_1}, [..., [Z_{k_2p}, x + y]...]]
//
// Only iterated brackets are formed. The inner sums are shared through the
// table S_q(m) = sum_{k_1 + ... + k_q = m} [Z_{k_1}, [..., [Z_{k_q}, x + y]...]],
// which satisfies S_q(m) = sum_k [Z_k, S_{q-1}(m - k)].

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lbcalc/error.hpp"

namespace lbcalc::detail {

inline constexpr int kMaxBchOrder = 12;

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
  }
  friend Rational operator+(Rational a, Rational b) {
    const std::int64_t g = std::gcd(a.den, b.den);
    return make(a.num * (b.den / g) + b.num * (a.den / g), a.den / g * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    const std::int64_t g1 = std::gcd(a.num, b.den);
    const std::int64_t g2 = std::gcd(b.num, a.den);
    const std::int64_t s1 = g1 == 0 ? 1 : g1;
    const std::int64_t s2 = g2 == 0 ? 1 : g2;
    return make((a.num / s1) * (b.num / s2), (a.den / s2) * (b.den / s1));
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Bernoulli numbers B_0..B_max (B_1 = -1/2 convention), exact.
inline std::vector<Rational> bernoulli_numbers(int max) {
  std::vector<Rational> b(static_cast<std::size_t>(max) + 1);
  b[0] = {1, 1};
  for (int m = 1; m <= max; ++m) {
    Rational acc{0, 1};
    std::int64_t binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      acc = acc + Rational{binom, 1} * b[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[static_cast<std::size_t>(m)] = acc * Rational::make(-1, m + 1);
  }
  return b;
}

/// Exact coefficients of the recursion: half[n] = 1/(2(n+1)) and
/// even[n][p] = B_{2p} / ((2p)! (n+1)), for n < max_order.
struct BchCoefficients {
  std::vector<Rational> half;
  std::vector<std::vector<Rational>> even;

  explicit BchCoefficients(int max_order) {
    const auto bern = bernoulli_numbers(max_order);
    for (int n = 1; n < max_order; ++n) {
      half.push_back(Rational::make(1, 2 * (n + 1)));
      std::vector<Rational> row;
      std::int64_t fact = 1;
      for (int p = 1; 2 * p <= n; ++p) {
        fact = 1;
        for (int i = 2; i <= 2 * p; ++i) fact *= i;
        row.push_back(bern[static_cast<std::size_t>(2 * p)] * Rational::make(1, fact * (n + 1)));
      }
      even.push_back(std::move(row));
    }
  }
};

inline const BchCoefficients& bch_coefficients() {
  static const BchCoefficients table(kMaxBchOrder);
  return table;
}

/// Returns Z_1, ..., Z_order.
template <class T, class Bracket>
std::vector<T> bch_components(const T& x, const T& y, int order, Bracket&& bracket) {
  if (order < 1 || order > kMaxBchOrder) {
    throw ValidationError("BCH order must lie in [1, " + std::to_string(kMaxBchOrder) + "]");
  }
  const auto& coeffs = bch_coefficients();
  const T sum = x + y;
  const T diff = x - y;

  std::vector<T> z;
  z.reserve(static_cast<std::size_t>(order));
  z.push_back(sum);

  // s[m][q] holds S_q(m) for 1 <= q <= m; index 0 unused.
  std::vector<std::vector<std::optional<T>>> s(static_cast<std::size_t>(order));

  for (int n = 1; n < order; ++n) {
    auto& row = s[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    row[1] = bracket(z.back(), sum);  // S_1(n) = [Z_n, x + y]
    for (int q = 2; q <= n; ++q) {
      std::optional<T> acc;
      for (int k = 1; k <= n - q + 1; ++k) {
        const auto& inner = *s[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(q - 1)];
        T term = bracket(z[static_cast<std::size_t>(k - 1)], inner);
        if (acc) {
          *acc = *acc + term;
        } else {
          acc = std::move(term);
        }
      }
      row[static_cast<std::size_t>(q)] = std::move(acc);
    }

    const auto idx = static_cast<std::size_t>(n - 1);
    T next = coeffs.half[idx].to_double() * bracket(diff, z.back());
    const auto& even = coeffs.even[idx];
    for (std::size_t p = 1; p <= even.size(); ++p) {
      next = next + even[p - 1].to_double() * *row[2 * p];
    }
    z.push_back(std::move(next));
  }
  return z;
}

}  // namespace lbcalc::detail
