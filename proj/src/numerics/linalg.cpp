#include "dirf/errors.hpp"
#include "dirf/numerics.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <string>
#include <utility>

namespace dirf {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw PreconditionError("Matrix: element count does not match shape");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw PreconditionError("matrix product: shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double lik = lhs(i, k);
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

std::vector<double> operator*(const Matrix& m, std::span<const double> v) {
  if (m.cols() != v.size()) throw PreconditionError("matrix-vector product: shape mismatch");
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

namespace {

template <class Op>
Matrix elementwise(const Matrix& lhs, const Matrix& rhs, Op op) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw PreconditionError("elementwise matrix op: shape mismatch");
  }
  Matrix out(lhs.rows(), lhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = op(lhs(i, j), rhs(i, j));
  }
  return out;
}

}  // namespace

Matrix operator+(const Matrix& lhs, const Matrix& rhs) {
  return elementwise(lhs, rhs, std::plus<>{});
}

Matrix operator-(const Matrix& lhs, const Matrix& rhs) {
  return elementwise(lhs, rhs, std::minus<>{});
}

Matrix gram(const Matrix& m) {
  Matrix g(m.cols(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t i = 0; i < m.cols(); ++i) {
      for (std::size_t j = i; j < m.cols(); ++j) g(i, j) += row[i] * row[j];
    }
  }
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

Matrix outer(std::span<const double> v) {
  Matrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * v[j];
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double determinant(Matrix m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant: matrix not square");
  const std::size_t n = m.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(m(i, k)) > std::fabs(m(pivot, k))) pivot = i;
    }
    if (m(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(pivot, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

SpdMatrix::SpdMatrix(Matrix m) : matrix_(std::move(m)) {
  const std::size_t n = matrix_.rows();
  if (n == 0 || matrix_.cols() != n) {
    throw PreconditionError("SpdMatrix: matrix must be square and nonempty");
  }
  double max_diag = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, matrix_(i, i));
    for (std::size_t j = 0; j < n; ++j) max_abs = std::max(max_abs, std::fabs(matrix_(i, j)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(matrix_(i, j) - matrix_(j, i)) > 1e-12 * max_abs) {
        throw PreconditionError("SpdMatrix: matrix is not symmetric");
      }
    }
  }
  const double pivot_floor = static_cast<double>(n) * 1e-14 * max_diag;
  chol_ = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = matrix_(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= chol_(j, k) * chol_(j, k);
    if (!(diag > pivot_floor)) {
      throw SingularMatrixError("Cholesky pivot " + std::to_string(j) +
                                " is not positive (matrix singular or indefinite)");
    }
    const double ljj = std::sqrt(diag);
    chol_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = matrix_(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= chol_(i, k) * chol_(j, k);
      chol_(i, j) = s / ljj;
    }
  }
}

std::vector<double> SpdMatrix::solve(std::span<const double> rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw PreconditionError("SpdMatrix::solve: length mismatch");
  std::vector<double> z(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) z[i] -= chol_(i, k) * z[k];
    z[i] /= chol_(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) z[ii] -= chol_(k, ii) * z[k];
    z[ii] /= chol_(ii, ii);
  }
  return z;
}

Matrix SpdMatrix::solve(const Matrix& rhs) const {
  if (rhs.rows() != dim()) throw PreconditionError("SpdMatrix::solve: shape mismatch");
  Matrix out(rhs.rows(), rhs.cols());
  std::vector<double> column(rhs.rows());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < rhs.rows(); ++i) column[i] = rhs(i, j);
    const auto z = solve(column);
    for (std::size_t i = 0; i < rhs.rows(); ++i) out(i, j) = z[i];
  }
  return out;
}

Matrix SpdMatrix::inverse() const {
  Matrix inv = solve(Matrix::identity(dim()));
  // Symmetrize away round-off so the result is a valid SpdMatrix input.
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = avg;
      inv(j, i) = avg;
    }
  }
  return inv;
}

double SpdMatrix::inverse_quad_form(std::span<const double> v) const {
  if (v.size() != dim()) throw PreconditionError("inverse_quad_form: length mismatch");
  // ||L^{-1} v||^2
  std::vector<double> w(v.begin(), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t k = 0; k < i; ++k) w[i] -= chol_(i, k) * w[k];
    w[i] /= chol_(i, i);
    s += w[i] * w[i];
  }
  return s;
}

double SpdMatrix::log_determinant() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(chol_(i, i));
  return 2.0 * s;
}

double SpdMatrix::determinant() const {
  double prod = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) prod *= chol_(i, i);
  return prod * prod;
}

double SpdMatrix::pivot_ratio() const {
  double lo = chol_(0, 0);
  double hi = chol_(0, 0);
  for (std::size_t i = 1; i < dim(); ++i) {
    lo = std::min(lo, chol_(i, i));
    hi = std::max(hi, chol_(i, i));
  }
  const double r = hi / lo;
  return r * r;
}

std::vector<double> spd_solve(const SpdMatrix& m, std::span<const double> rhs) {
  return m.solve(rhs);
}

double rank1_det_update(double det_a, double quad, double t) {
  return det_a * (1.0 - t * t * quad);
}

double sherman_morrison_quad(double quad_a) {
  if (!(quad_a >= 0.0)) throw DomainError("sherman_morrison_quad: quadratic form must be nonnegative");
  if (quad_a >= 1.0) {
    throw DegenerateError("sherman_morrison_quad: v^T A^{-1} v >= 1, so A - v v^T is singular");
  }
  return quad_a / (1.0 - quad_a);
}

}  // namespace dirf
