#pragma once

#include "dirf/numerics.hpp"
#include "dirf/quadrature.hpp"

#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirf {

/// The line s(t) = (1 - t) s_psi in centered sufficient-statistic space.
/// t = 0 is the point whose MLE is the constrained fit, t = 1 is the data.
class CenteredLine {
 public:
  CenteredLine(std::vector<double> s_psi, int d, bool degenerate)
      : s_psi_(std::move(s_psi)), d_(d), degenerate_(degenerate) {}

  const std::vector<double>& s_psi() const noexcept { return s_psi_; }
  int d() const noexcept { return d_; }
  /// s_psi is zero up to round-off relative to the observed statistic.
  bool degenerate() const noexcept { return degenerate_; }

  std::vector<double> at(double t) const;

 private:
  std::vector<double> s_psi_;
  int d_;
  bool degenerate_;
};

/// s_psi = u_psi - u_obs. Throws PreconditionError on length mismatch or d < 1.
CenteredLine build_centered_line(std::span<const double> u_psi, std::span<const double> u_obs,
                                 int d);

struct ComparisonStatistics {
  double wald = 0.0;
  double lrt = 0.0;
  int df = 0;
};

/// (psi_hat - psi)^T V1^{-1} (psi_hat - psi), with V1 the leading
/// interest block of the inverse observed information.
double wald_statistic(const SpdMatrix& observed_information, std::span<const double> difference);

/// Every model module exposes this surface. Fit types carry `warnings`.
template <class M>
concept ExpFamModel = requires(const typename M::Data& data, const typename M::Hypothesis& hyp,
                               const typename M::Fit& fit, std::span<const double> u) {
  { M::name } -> std::convertible_to<std::string_view>;
  { M::fit(data, hyp) } -> std::same_as<typename M::Fit>;
  { M::sufficient_statistic(data) } -> std::same_as<std::vector<double>>;
  { M::constrained_sufficient_statistic(data, fit) } -> std::same_as<std::vector<double>>;
  { M::canonical_mle(data, u) } -> std::same_as<std::vector<double>>;
  { M::constrained_canonical(fit) } -> std::same_as<std::vector<double>>;
  { M::interest_dim(fit) } -> std::same_as<int>;
  { M::is_degenerate(fit) } -> std::same_as<bool>;
  { M::line_density(fit) } -> std::same_as<LineDensity>;
  { M::closed_form_pvalue(fit) } -> std::same_as<double>;
  { M::comparison_statistics(data, hyp) } -> std::same_as<ComparisonStatistics>;
  { fit.warnings } -> std::convertible_to<std::vector<std::string>>;
};

template <ExpFamModel M>
DirectionalResult directional_test(const typename M::Data& data,
                                   const typename M::Hypothesis& hypothesis, Method method,
                                   const QuadratureOptions& options = {}) {
  const auto fit = M::fit(data, hypothesis);
  const auto u_obs = M::sufficient_statistic(data);
  const auto u_psi = M::constrained_sufficient_statistic(data, fit);
  const auto line = build_centered_line(u_psi, u_obs, M::interest_dim(fit));

  DirectionalResult result;
  if (line.degenerate() || M::is_degenerate(fit)) {
    result.p = 1.0;
    result.numerator = 1.0;
    result.denominator = 1.0;
    result.t_max = std::numeric_limits<double>::infinity();
    result.method = method;
    result.diagnostics.degenerate = true;
    result.diagnostics.warnings = fit.warnings;
    result.diagnostics.warnings.push_back(
        "hypothesis coincides with the unconstrained fit (s_psi = 0); p set to 1");
    return result;
  }

  const auto density = M::line_density(fit);
  if (method == Method::closed_form) {
    const double p = M::closed_form_pvalue(fit);
    result.p = p;
    result.numerator = p;
    result.denominator = 1.0;
    result.t_max = density.t_max();
    result.est_abs_error = 0.0;
    result.diagnostics.closed_form_p = p;
  } else {
    result = directional_pvalue(density, options);
    if (method == Method::both) {
      const double closed = M::closed_form_pvalue(fit);
      result.diagnostics.closed_form_p = closed;
      result.diagnostics.discrepancy = std::fabs(result.p - closed);
    }
  }
  result.method = method;
  for (const auto& w : fit.warnings) result.diagnostics.warnings.push_back(w);
  return result;
}

}  // namespace dirf
