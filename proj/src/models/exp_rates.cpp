#include "dirf/models/exp_rates.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dirf {

ExpRatesData::ExpRatesData(double u1_, double u2_, int n1_, int n2_)
    : u1(u1_), u2(u2_), n1(n1_), n2(n2_) {
  if (n1 < 1 || n2 < 1) throw PreconditionError("exp-rates: each group needs at least one observation");
  if (!(u1 > 0.0) || !(u2 > 0.0) || !std::isfinite(u1) || !std::isfinite(u2)) {
    throw PreconditionError("exp-rates: group sums must be positive and finite");
  }
}

ExpRatesData ExpRatesData::from_samples(std::span<const double> group1,
                                        std::span<const double> group2) {
  auto positive = [](double y) { return y > 0.0 && std::isfinite(y); };
  if (!std::all_of(group1.begin(), group1.end(), positive) ||
      !std::all_of(group2.begin(), group2.end(), positive)) {
    throw PreconditionError("exp-rates: observations must be positive");
  }
  return ExpRatesData(std::accumulate(group1.begin(), group1.end(), 0.0),
                      std::accumulate(group2.begin(), group2.end(), 0.0),
                      static_cast<int>(group1.size()), static_cast<int>(group2.size()));
}

ExpRatesFit ExpRates::fit(const Data& data, double psi) {
  if (!(psi > 0.0) || !std::isfinite(psi)) throw PreconditionError("exp-rates: psi must be positive");
  const double n1 = data.n1;
  const double n2 = data.n2;
  const double n = n1 + n2;
  const double pooled = psi * data.u1 + data.u2;

  ExpRatesFit f;
  f.psi = psi;
  f.n1 = data.n1;
  f.n2 = data.n2;
  f.theta_hat = {n1 / data.u1, n2 / data.u2};
  f.theta_hat_psi = {n * psi / pooled, n / pooled};
  f.u_psi = {n1 / f.theta_hat_psi[0], n2 / f.theta_hat_psi[1]};
  f.W = psi * (data.u1 / n1) / (data.u2 / n2);

  // u1_psi - u1 = -D / (n psi) and u2_psi - u2 = D / n, with D formed once.
  const double lhs = n2 * psi * data.u1;
  const double rhs = n1 * data.u2;
  const double diff = lhs - rhs;
  f.degenerate = std::fabs(diff) <= 1e-13 * std::max(lhs, rhs);
  if (f.degenerate) {
    f.a1 = std::numeric_limits<double>::infinity();
    f.a2 = std::numeric_limits<double>::infinity();
  } else {
    f.a1 = -n * psi * f.u_psi[0] / diff;
    f.a2 = n * f.u_psi[1] / diff;
  }
  return f;
}

std::vector<double> ExpRates::sufficient_statistic(const Data& data) {
  return {data.u1, data.u2};
}

std::vector<double> ExpRates::constrained_sufficient_statistic(const Data&, const Fit& fit) {
  return {fit.u_psi[0], fit.u_psi[1]};
}

std::vector<double> ExpRates::canonical_mle(const Data& data, std::span<const double> u) {
  if (u.size() != 2) throw PreconditionError("exp-rates: sufficient statistic has length 2");
  return {-data.n1 / u[0], -data.n2 / u[1]};
}

std::vector<double> ExpRates::constrained_canonical(const Fit& fit) {
  return {-fit.theta_hat_psi[0], -fit.theta_hat_psi[1]};
}

LineDensity ExpRates::line_density(const Fit& fit) {
  if (fit.degenerate) throw DegenerateError("exp-rates: hypothesis at the MLE, no line density");
  return LineDensity::linear(1, {{fit.a1, static_cast<double>(fit.n1 - 1)},
                                 {fit.a2, static_cast<double>(fit.n2 - 1)}});
}

double ExpRates::closed_form_pvalue(const Fit& fit) {
  if (fit.degenerate) return 1.0;
  const FParams g(2.0 * fit.n1, 2.0 * fit.n2);
  if (fit.W >= 1.0) return f_sf(fit.W, g) / f_sf(1.0, g);
  return f_cdf(fit.W, g) / f_cdf(1.0, g);
}

double ExpRates::log_likelihood(const Data& data, std::array<double, 2> theta) {
  return data.n1 * std::log(theta[0]) - theta[0] * data.u1 + data.n2 * std::log(theta[1]) -
         theta[1] * data.u2;
}

ComparisonStatistics ExpRates::comparison_statistics(const Data& data, double psi) {
  const auto f = fit(data, psi);
  // Interest psi = theta1 / theta2, nuisance lambda = theta2.
  const double psi_hat = f.theta_hat[0] / f.theta_hat[1];
  const double lambda_hat = f.theta_hat[1];
  Matrix info(2, 2);
  info(0, 0) = data.n1 / (psi_hat * psi_hat);
  info(0, 1) = data.u1;
  info(1, 0) = data.u1;
  info(1, 1) = (data.n1 + data.n2) / (lambda_hat * lambda_hat);
  const std::array<double, 1> diff = {psi_hat - psi};

  ComparisonStatistics out;
  out.df = 1;
  out.wald = wald_statistic(SpdMatrix(info), diff);
  out.lrt = std::max(0.0, 2.0 * (log_likelihood(data, f.theta_hat) -
                                 log_likelihood(data, f.theta_hat_psi)));
  return out;
}

}  // namespace dirf
