#pragma once

#include "dirf/core.hpp"
#include "dirf/numerics.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirf {

/// Response y and n x p design X. Intercepts are ordinary columns.
struct RegressionData {
  std::vector<double> y;
  Matrix X;

  /// Requires n > p + 1. Column rank is checked by the fit.
  RegressionData(std::vector<double> y_, Matrix X_);

  std::size_t n() const noexcept { return y.size(); }
  std::size_t p() const noexcept { return X.cols(); }
};

/// H: A beta = psi with A of full row rank d <= p.
struct LinearConstraint {
  Matrix A;
  std::vector<double> psi;

  LinearConstraint(Matrix A_, std::vector<double> psi_);

  std::size_t d() const noexcept { return A.rows(); }
};

struct LinRegFit {
  std::vector<double> beta_hat;
  std::vector<double> beta_hat_psi;
  double sigma2_hat;
  double sigma2_hat_psi;
  /// sigma^2(t) = a - b t^2 along the line; a = sigma2_hat_psi.
  double a;
  /// n^{-1} (y - X beta_psi)^T X (X^T X)^{-1} X^T (y - X beta_psi)
  double b;
  /// Residual sum of squares at beta_hat.
  double sse;
  /// (A beta_hat - psi)^T {A (X^T X)^{-1} A^T}^{-1} (A beta_hat - psi)
  double constraint_quad;
  /// Textbook F statistic, F(d, n - p) under H.
  double F_stat;
  int n;
  int p;
  int d;
  bool degenerate;
  std::vector<std::string> warnings;
};

/// Gaussian linear regression with a linear constraint on the coefficients.
///
/// The constraint is linear in the canonical parameter
/// (beta / sigma^2, -1 / (2 sigma^2)), so no nuisance adjustment enters, and
/// the information determinant is proportional to sigma^2(t)^{p+2}. Combined
/// with the likelihood-ratio factor sigma^2(t)^{n/2} this gives the density
/// exponent (n - p - 2) / 2.
struct LinReg {
  using Data = RegressionData;
  using Hypothesis = LinearConstraint;
  using Fit = LinRegFit;
  static constexpr std::string_view name = "linreg";

  /// Throws PreconditionError on a rank-deficient X or A, a shape mismatch,
  /// or a perfect fit (zero residual variance).
  static Fit fit(const Data& data, const Hypothesis& constraint);
  /// (X^T y, y^T y)
  static std::vector<double> sufficient_statistic(const Data& data);
  static std::vector<double> constrained_sufficient_statistic(const Data& data, const Fit& fit);
  static std::vector<double> canonical_mle(const Data& data, std::span<const double> u);
  static std::vector<double> constrained_canonical(const Fit& fit);
  static int interest_dim(const Fit& fit) { return fit.d; }
  static bool is_degenerate(const Fit& fit) { return fit.degenerate; }

  /// t^{d-1} (a - b t^2)^{(n-p-2)/2}, t_max = sqrt(a / b).
  static LineDensity line_density(const Fit& fit);
  /// 1 - G(F_stat) with G the F(d, n - p) CDF.
  static double closed_form_pvalue(const Fit& fit);

  static double log_likelihood(const Data& data, std::span<const double> beta, double sigma2);
  static ComparisonStatistics comparison_statistics(const Data& data, const Hypothesis& constraint);
};

}  // namespace dirf
