#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dirf {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln Gamma(x) for x > 0. Lanczos below 10, Stirling series above.
double ln_gamma(double x);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_inc_gamma_upper(double a, double x);

struct FParams {
  double d1;
  double d2;

  FParams(double d1_, double d2_);
};

/// CDF of the F(d1, d2) distribution.
double f_cdf(double x, const FParams& params);

/// Survival function 1 - CDF, evaluated without cancellation.
double f_sf(double x, const FParams& params);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi2_sf(double x, double df);

// ---------------------------------------------------------------------------
// Dense linear algebra
// ---------------------------------------------------------------------------

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& lhs, const Matrix& rhs);
std::vector<double> operator*(const Matrix& m, std::span<const double> v);
Matrix operator+(const Matrix& lhs, const Matrix& rhs);
Matrix operator-(const Matrix& lhs, const Matrix& rhs);

/// M^T M.
Matrix gram(const Matrix& m);
/// v v^T.
Matrix outer(std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

/// Determinant by Gaussian elimination with partial pivoting. Test and
/// diagnostic use; SPD code paths go through SpdMatrix.
double determinant(Matrix m);

/// Symmetric positive-definite matrix with its Cholesky factor.
///
/// Construction fails with SingularMatrixError when a pivot drops to
/// dim * 1e-14 * max diagonal or below; nothing is regularized.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const Matrix& matrix() const noexcept { return matrix_; }
  /// Lower-triangular L with L L^T = M.
  const Matrix& cholesky_factor() const noexcept { return chol_; }

  std::vector<double> solve(std::span<const double> rhs) const;
  /// M^{-1} B, column by column.
  Matrix solve(const Matrix& rhs) const;
  Matrix inverse() const;

  /// v^T M^{-1} v.
  double inverse_quad_form(std::span<const double> v) const;

  double determinant() const;
  double log_determinant() const;

  /// Squared ratio of largest to smallest Cholesky pivot.
  double pivot_ratio() const;

 private:
  Matrix matrix_;
  Matrix chol_;
};

std::vector<double> spd_solve(const SpdMatrix& m, std::span<const double> rhs);

/// |A - t^2 v v^T| from |A| and v^T A^{-1} v (matrix determinant lemma).
double rank1_det_update(double det_a, double quad, double t);

/// v^T B^{-1} v given v^T A^{-1} v where A = B + v v^T.
double sherman_morrison_quad(double quad_a);

}  // namespace dirf
