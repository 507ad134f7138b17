#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lbcalc {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense square complex matrix with value semantics.
///
/// The dimension is fixed at construction and always positive; every
/// constructor that accepts external data rejects non-square shapes and
/// non-finite entries with ValidationError.
class Matrix {
 public:
  explicit Matrix(std::size_t dim);
  /// Row-major entries; `entries.size()` must equal `dim * dim`.
  Matrix(std::size_t dim, std::vector<Complex> entries);

  static Matrix identity(std::size_t dim);
  static Matrix unit(std::size_t dim, std::size_t row, std::size_t col, Complex value = 1.0);
  static Matrix diagonal(std::span<const Complex> diag);
  static Matrix diagonal(std::initializer_list<Complex> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const noexcept { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  std::span<const Complex> entries() const noexcept { return data_; }

  bool is_finite() const noexcept;
  bool is_zero() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex scalar);

  friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
  friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
  friend Matrix operator*(Complex scalar, Matrix m) { return m *= scalar; }
  friend Matrix operator*(Matrix m, Complex scalar) { return m *= scalar; }
  friend Matrix operator-(Matrix m);
  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

/// uv - vu
Matrix commutator(const Matrix& u, const Matrix& v);

/// Induced 1-norm: maximal absolute column sum.
double norm_one(const Matrix& m);

/// Largest entry modulus.
double max_abs(const Matrix& m);

/// Gauss-Jordan inverse with partial pivoting. Throws DomainError if singular.
Matrix inverse(const Matrix& m);

}  // namespace lbcalc
