#pragma once

#include "dirf/core.hpp"
#include "dirf/numerics.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirf {

/// n x p sample matrix, one observation per row. Requires n >= p + 1; the
/// scatter matrix must also be nonsingular, which the fit checks.
struct MvnData {
  Matrix Y;

  explicit MvnData(Matrix Y_);

  std::size_t n() const noexcept { return Y.rows(); }
  std::size_t p() const noexcept { return Y.cols(); }
};

struct MvnFit {
  std::vector<double> psi;
  std::vector<double> ybar;
  /// ybar - psi
  std::vector<double> v;
  /// n^{-1} sum (y_i - psi)(y_i - psi)^T, the constrained covariance MLE.
  Matrix A;
  /// n^{-1} sum (y_i - ybar)(y_i - ybar)^T, the unconstrained covariance MLE.
  Matrix B;
  /// v^T A^{-1} v, in [0, 1).
  double C;
  /// v^T B^{-1} v computed from B directly.
  double quad_B;
  /// Hotelling's (n - 1) v^T B^{-1} v.
  double T2;
  double log_det_A;
  double log_det_B;
  int n;
  int p;
  bool degenerate;
  std::vector<std::string> warnings;
};

/// Multivariate normal mean with unknown covariance, H: mu = psi.
///
/// Along the line the covariance MLE is A - t^2 v v^T, with determinant
/// |A| (1 - t^2 C). The likelihood ratio contributes |.|^{n/2} and the
/// information determinant |.|^{-(p+2)/2}; the canonical parameter is linear
/// in the precision matrix, so the nuisance adjustment is constant in t.
struct MvnMean {
  using Data = MvnData;
  using Hypothesis = std::vector<double>;
  using Fit = MvnFit;
  static constexpr std::string_view name = "mvn-mean";

  /// Throws PreconditionError when B is singular (data in an affine subspace).
  static Fit fit(const Data& data, const Hypothesis& psi);
  /// (n ybar, vec(sum y_i y_i^T))
  static std::vector<double> sufficient_statistic(const Data& data);
  static std::vector<double> constrained_sufficient_statistic(const Data& data, const Fit& fit);
  /// (Lambda mu, -vec(Lambda) / 2) at the MLE implied by u.
  static std::vector<double> canonical_mle(const Data& data, std::span<const double> u);
  static std::vector<double> constrained_canonical(const Fit& fit);
  static int interest_dim(const Fit& fit) { return fit.p; }
  static bool is_degenerate(const Fit& fit) { return fit.degenerate; }

  /// t^{p-1} (1 - C t^2)^{(n-p-2)/2}, t_max = C^{-1/2}.
  static LineDensity line_density(const Fit& fit);
  /// Hotelling: 1 - G((n - p) / p * v^T B^{-1} v), G the F(p, n - p) CDF.
  static double closed_form_pvalue(const Fit& fit);

  static ComparisonStatistics comparison_statistics(const Data& data, const Hypothesis& psi);
};

}  // namespace dirf
