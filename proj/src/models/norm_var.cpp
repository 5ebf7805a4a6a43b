#include "dirf/models/norm_var.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dirf {

namespace {

struct MeanVar {
  double mean;
  double var;
};

MeanVar two_pass(std::span<const double> y) {
  double sum = 0.0;
  for (double v : y) sum += v;
  const double mean = sum / static_cast<double>(y.size());
  double ss = 0.0;
  double correction = 0.0;
  for (double v : y) {
    ss += (v - mean) * (v - mean);
    correction += v - mean;
  }
  const double n = static_cast<double>(y.size());
  return {mean, (ss - correction * correction / n) / n};
}

}  // namespace

NormVarData::NormVarData(int n1_, int n2_, double v1sq_, double v2sq_, double mean1_,
                         double mean2_)
    : n1(n1_), n2(n2_), v1sq(v1sq_), v2sq(v2sq_), mean1(mean1_), mean2(mean2_) {
  if (n1 < 2 || n2 < 2) throw PreconditionError("norm-var: each group needs at least two observations");
  if (!(v1sq > 0.0) || !(v2sq > 0.0) || !std::isfinite(v1sq) || !std::isfinite(v2sq)) {
    throw PreconditionError("norm-var: within-group variances must be positive");
  }
}

NormVarData NormVarData::from_samples(std::span<const double> group1,
                                      std::span<const double> group2) {
  if (group1.size() < 2 || group2.size() < 2) {
    throw PreconditionError("norm-var: each group needs at least two observations");
  }
  const auto g1 = two_pass(group1);
  const auto g2 = two_pass(group2);
  return NormVarData(static_cast<int>(group1.size()), static_cast<int>(group2.size()), g1.var,
                     g2.var, g1.mean, g2.mean);
}

NormVarFit NormVar::fit(const Data& data, double psi) {
  if (!(psi > 0.0) || !std::isfinite(psi)) throw PreconditionError("norm-var: psi must be positive");
  const double n1 = data.n1;
  const double n2 = data.n2;
  const double n = n1 + n2;

  NormVarFit f;
  f.psi = psi;
  f.n1 = data.n1;
  f.n2 = data.n2;
  f.v1sq = data.v1sq;
  f.v2sq = data.v2sq;
  f.mean1 = data.mean1;
  f.mean2 = data.mean2;
  const double s2 = (n1 * data.v1sq / psi + n2 * data.v2sq) / n;
  f.sigma2_psi = {psi * s2, s2};

  const double s1sq = n1 * data.v1sq / (n1 - 1.0);
  const double s2sq = n2 * data.v2sq / (n2 - 1.0);
  f.W = psi * s2sq / s1sq;
  f.threshold = n2 * (n1 - 1.0) / (n1 * (n2 - 1.0));

  // sigma^2_1psi - v1^2 = n2 D / n and sigma^2_2psi - v2^2 = -n1 D / (n psi).
  const double lhs = psi * data.v2sq;
  const double rhs = data.v1sq;
  const double diff = lhs - rhs;
  f.degenerate = std::fabs(diff) <= 1e-13 * std::max(lhs, rhs);
  if (f.degenerate) {
    f.a1 = 0.0;
    f.a2 = 0.0;
  } else {
    f.a1 = n2 * diff / (n * f.sigma2_psi[0]);
    f.a2 = -n1 * diff / (n * psi * f.sigma2_psi[1]);
  }
  return f;
}

std::vector<double> NormVar::sufficient_statistic(const Data& data) {
  return {data.n1 * data.mean1, data.n1 * (data.v1sq + data.mean1 * data.mean1),
          data.n2 * data.mean2, data.n2 * (data.v2sq + data.mean2 * data.mean2)};
}

std::vector<double> NormVar::constrained_sufficient_statistic(const Data& data, const Fit& fit) {
  return {data.n1 * data.mean1, data.n1 * (fit.sigma2_psi[0] + data.mean1 * data.mean1),
          data.n2 * data.mean2, data.n2 * (fit.sigma2_psi[1] + data.mean2 * data.mean2)};
}

std::vector<double> NormVar::canonical_mle(const Data& data, std::span<const double> u) {
  if (u.size() != 4) throw PreconditionError("norm-var: sufficient statistic has length 4");
  std::vector<double> phi(4);
  const std::array<double, 2> n = {static_cast<double>(data.n1), static_cast<double>(data.n2)};
  for (std::size_t g = 0; g < 2; ++g) {
    const double mean = u[2 * g] / n[g];
    const double var = u[2 * g + 1] / n[g] - mean * mean;
    phi[2 * g] = mean / var;
    phi[2 * g + 1] = -0.5 / var;
  }
  return phi;
}

std::vector<double> NormVar::constrained_canonical(const Fit& fit) {
  return {fit.mean1 / fit.sigma2_psi[0], -0.5 / fit.sigma2_psi[0], fit.mean2 / fit.sigma2_psi[1],
          -0.5 / fit.sigma2_psi[1]};
}

LineDensity NormVar::line_density(const Fit& fit) {
  if (fit.degenerate) throw DegenerateError("norm-var: hypothesis at the MLE, no line density");
  return LineDensity::linear(1, {{1.0 / fit.a1, 0.5 * (fit.n1 - 3)},
                                 {1.0 / fit.a2, 0.5 * (fit.n2 - 3)}});
}

double NormVar::closed_form_pvalue(const Fit& fit) {
  if (fit.degenerate) return 1.0;
  const FParams g(fit.n2 - 1.0, fit.n1 - 1.0);
  if (fit.W >= fit.threshold) return f_sf(fit.W, g) / f_sf(fit.threshold, g);
  return f_cdf(fit.W, g) / f_cdf(fit.threshold, g);
}

double NormVar::log_likelihood(const Data& data, std::array<double, 2> mu,
                               std::array<double, 2> sigma2) {
  const std::array<int, 2> n = {data.n1, data.n2};
  const std::array<double, 2> mean = {data.mean1, data.mean2};
  const std::array<double, 2> v = {data.v1sq, data.v2sq};
  double ll = 0.0;
  for (std::size_t g = 0; g < 2; ++g) {
    const double dev = mean[g] - mu[g];
    ll += -0.5 * n[g] * std::log(2.0 * std::numbers::pi * sigma2[g]) -
          0.5 * n[g] * (v[g] + dev * dev) / sigma2[g];
  }
  return ll;
}

ComparisonStatistics NormVar::comparison_statistics(const Data& data, double psi) {
  const auto f = fit(data, psi);
  // Interest psi = sigma1^2 / sigma2^2, nuisance lambda = sigma2^2; the means
  // are orthogonal to both at the MLE.
  const double psi_hat = data.v1sq / data.v2sq;
  const double lambda = data.v2sq;
  const double s1 = 0.5 * data.n1 * data.v1sq;
  const double s2 = 0.5 * data.n2 * data.v2sq;
  const double n = data.n1 + data.n2;
  Matrix info(2, 2);
  info(0, 0) = -(data.n1 / (2.0 * psi_hat * psi_hat) - 2.0 * s1 / (psi_hat * psi_hat * psi_hat * lambda));
  info(0, 1) = s1 / (psi_hat * psi_hat * lambda * lambda);
  info(1, 0) = info(0, 1);
  info(1, 1) = -(n / (2.0 * lambda * lambda) - 2.0 * s1 / (psi_hat * lambda * lambda * lambda) -
                 2.0 * s2 / (lambda * lambda * lambda));
  const std::array<double, 1> diff = {psi_hat - psi};

  ComparisonStatistics out;
  out.df = 1;
  out.wald = wald_statistic(SpdMatrix(info), diff);
  const std::array<double, 2> mu = {data.mean1, data.mean2};
  out.lrt = std::max(0.0, 2.0 * (log_likelihood(data, mu, {data.v1sq, data.v2sq}) -
                                 log_likelihood(data, mu, f.sigma2_psi)));
  return out;
}

}  // namespace dirf
