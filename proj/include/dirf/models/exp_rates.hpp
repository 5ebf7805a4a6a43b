#pragma once

#include "dirf/core.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirf {

/// Sufficient statistics for two independent exponential samples.
struct ExpRatesData {
  double u1;  ///< sum of group-1 observations
  double u2;  ///< sum of group-2 observations
  int n1;
  int n2;

  ExpRatesData(double u1_, double u2_, int n1_, int n2_);
  static ExpRatesData from_samples(std::span<const double> group1, std::span<const double> group2);
};

struct ExpRatesFit {
  double psi;
  std::array<double, 2> theta_hat;
  std::array<double, 2> theta_hat_psi;
  std::array<double, 2> u_psi;
  /// Roots of the line density; infinite when degenerate.
  double a1;
  double a2;
  /// psi * ybar1 / ybar2, distributed F(2 n1, 2 n2) under the hypothesis.
  double W;
  int n1;
  int n2;
  bool degenerate;
  std::vector<std::string> warnings;
};

/// Two-group exponential rate ratio, H: theta1 / theta2 = psi.
///
/// Canonical parameter (-theta1, -theta2), sufficient statistic (u1, u2).
/// The hypothesis is nonlinear in the canonical parameter, but the canonical
/// parameter is linear in the nuisance rate theta2, so the nuisance
/// information adjustment is constant along the line and drops out of the
/// ratio of integrals.
struct ExpRates {
  using Data = ExpRatesData;
  using Hypothesis = double;
  using Fit = ExpRatesFit;
  static constexpr std::string_view name = "exp-rates";

  static Fit fit(const Data& data, double psi);
  static std::vector<double> sufficient_statistic(const Data& data);
  static std::vector<double> constrained_sufficient_statistic(const Data& data, const Fit& fit);
  static std::vector<double> canonical_mle(const Data& data, std::span<const double> u);
  static std::vector<double> constrained_canonical(const Fit& fit);
  static int interest_dim(const Fit&) { return 1; }
  static bool is_degenerate(const Fit& fit) { return fit.degenerate; }

  /// (1 - t/a1)^{n1-1} (1 - t/a2)^{n2-1}, t_max = max(a1, a2).
  static LineDensity line_density(const Fit& fit);
  /// Conditional F-test: (1 - G(W)) / (1 - G(1)) above 1, G(W) / G(1) below.
  static double closed_form_pvalue(const Fit& fit);

  static double log_likelihood(const Data& data, std::array<double, 2> theta);
  static ComparisonStatistics comparison_statistics(const Data& data, double psi);
};

}  // namespace dirf
