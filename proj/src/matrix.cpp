#include "lbcalc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lbcalc/error.hpp"

namespace lbcalc {

namespace {

void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("matrix dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw ValidationError("matrix dimension must be positive");
}

Matrix::Matrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw ValidationError("matrix dimension must be positive");
  if (data_.size() != dim * dim) {
    throw ValidationError("matrix is not square: " + std::to_string(data_.size()) +
                          " entries for dimension " + std::to_string(dim));
  }
  if (!is_finite()) throw ValidationError("matrix has non-finite entries");
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::unit(std::size_t dim, std::size_t row, std::size_t col, Complex value) {
  if (row >= dim || col >= dim) throw ValidationError("unit matrix index out of range");
  Matrix m(dim);
  m(row, col) = value;
  return m;
}

Matrix Matrix::diagonal(std::span<const Complex> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  if (!m.is_finite()) throw ValidationError("matrix has non-finite entries");
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  std::vector<Complex> entries;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw ValidationError("matrix rows do not form a square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(rows.size(), std::move(entries));
}

bool Matrix::is_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Complex z) { return z == Complex{}; });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

Matrix operator-(Matrix m) {
  for (auto& z : m.data_) z = -z;
  return m;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require_same_dim(lhs, rhs);
  const std::size_t n = lhs.dim();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Matrix commutator(const Matrix& u, const Matrix& v) { return u * v - v * u; }

double norm_one(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (Complex z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) == 0.0) throw DomainError("matrix is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Complex scale = 1.0 / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace lbcalc
