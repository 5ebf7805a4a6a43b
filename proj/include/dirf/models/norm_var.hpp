#pragma once

#include "dirf/core.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirf {

/// Two normal samples with unknown means, reduced to sizes, means and
/// biased variances v_i^2 = n_i^{-1} sum (y_ij - ybar_i)^2.
struct NormVarData {
  int n1;
  int n2;
  double v1sq;
  double v2sq;
  double mean1 = 0.0;
  double mean2 = 0.0;

  NormVarData(int n1_, int n2_, double v1sq_, double v2sq_, double mean1_ = 0.0,
              double mean2_ = 0.0);
  /// Two-pass mean and variance per group.
  static NormVarData from_samples(std::span<const double> group1, std::span<const double> group2);
};

struct NormVarFit {
  double psi;
  /// Constrained variance MLEs (sigma^2_1psi, sigma^2_2psi), ratio psi.
  std::array<double, 2> sigma2_psi;
  /// a_i = (sigma^2_ipsi - v_i^2) / sigma^2_ipsi. The line density roots are 1 / a_i.
  double a1;
  double a2;
  /// psi s2^2 / s1^2 with unbiased variances, F(n2 - 1, n1 - 1) under H.
  double W;
  /// n2 (n1 - 1) / (n1 (n2 - 1))
  double threshold;
  int n1;
  int n2;
  double v1sq;
  double v2sq;
  double mean1;
  double mean2;
  bool degenerate;
  std::vector<std::string> warnings;
};

/// Two-group normal variance ratio, H: sigma1^2 / sigma2^2 = psi.
///
/// The canonical parameter (mu_i / sigma_i^2, -1 / (2 sigma_i^2)) is linear
/// in the nuisance precision of group 2, so the nuisance adjustment is
/// constant in t.
struct NormVar {
  using Data = NormVarData;
  using Hypothesis = double;
  using Fit = NormVarFit;
  static constexpr std::string_view name = "norm-var";

  /// sigma^2_2psi = (n1 v1^2 / psi + n2 v2^2) / (n1 + n2), sigma^2_1psi = psi sigma^2_2psi.
  static Fit fit(const Data& data, double psi);
  /// (sum y1, sum y1^2, sum y2, sum y2^2)
  static std::vector<double> sufficient_statistic(const Data& data);
  static std::vector<double> constrained_sufficient_statistic(const Data& data, const Fit& fit);
  static std::vector<double> canonical_mle(const Data& data, std::span<const double> u);
  static std::vector<double> constrained_canonical(const Fit& fit);
  static int interest_dim(const Fit&) { return 1; }
  static bool is_degenerate(const Fit& fit) { return fit.degenerate; }

  /// (1 - t a1)^{(n1-3)/2} (1 - t a2)^{(n2-3)/2}, t_max = 1 / max(a1, a2).
  static LineDensity line_density(const Fit& fit);
  static double closed_form_pvalue(const Fit& fit);

  /// Full log-likelihood at means (mu1, mu2) and variances (s1, s2).
  static double log_likelihood(const Data& data, std::array<double, 2> mu,
                               std::array<double, 2> sigma2);
  static ComparisonStatistics comparison_statistics(const Data& data, double psi);
};

}  // namespace dirf
