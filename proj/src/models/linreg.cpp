#include "dirf/models/linreg.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace dirf {

namespace {

SpdMatrix factor_design(const Matrix& X) {
  try {
    return SpdMatrix(gram(X));
  } catch (const SingularMatrixError&) {
    throw PreconditionError("linreg: design matrix X is not of full column rank");
  }
}

std::vector<double> residuals(const RegressionData& data, std::span<const double> beta) {
  auto fitted = data.X * beta;
  for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] = data.y[i] - fitted[i];
  return fitted;
}

}  // namespace

RegressionData::RegressionData(std::vector<double> y_, Matrix X_)
    : y(std::move(y_)), X(std::move(X_)) {
  if (X.rows() != y.size()) throw PreconditionError("linreg: X must have one row per response");
  if (X.cols() == 0) throw PreconditionError("linreg: X has no columns");
  if (y.size() <= X.cols() + 1) {
    throw PreconditionError("linreg: need n > p + 1 observations (n = " + std::to_string(y.size()) +
                            ", p = " + std::to_string(X.cols()) + ")");
  }
}

LinearConstraint::LinearConstraint(Matrix A_, std::vector<double> psi_)
    : A(std::move(A_)), psi(std::move(psi_)) {
  if (A.rows() == 0) throw PreconditionError("linreg: constraint matrix A has no rows");
  if (A.rows() != psi.size()) throw PreconditionError("linreg: A has " + std::to_string(A.rows()) +
                                                      " rows but psi has length " +
                                                      std::to_string(psi.size()));
}

LinRegFit LinReg::fit(const Data& data, const Hypothesis& constraint) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  const std::size_t d = constraint.d();
  if (constraint.A.cols() != p) {
    throw PreconditionError("linreg: A must have as many columns as X");
  }
  if (d > p) throw PreconditionError("linreg: more constraints than coefficients");

  const SpdMatrix xtx = factor_design(data.X);
  const auto xty = data.X.transpose() * std::span<const double>(data.y);

  LinRegFit f;
  f.n = static_cast<int>(n);
  f.p = static_cast<int>(p);
  f.d = static_cast<int>(d);
  f.beta_hat = xtx.solve(xty);
  const auto r = residuals(data, f.beta_hat);
  f.sse = dot(r, r);
  const double yty = dot(data.y, data.y);
  if (!(f.sse > 1e-28 * yty) || f.sse == 0.0) {
    throw PreconditionError("linreg: perfect fit, residual variance is zero");
  }
  f.sigma2_hat = f.sse / static_cast<double>(n);
  if (xtx.pivot_ratio() > 1e12) {
    f.warnings.push_back("linreg: X^T X is badly conditioned (Cholesky pivot ratio > 1e12)");
  }

  // (X^T X)^{-1} A^T and A (X^T X)^{-1} A^T
  const Matrix xtx_inv_at = xtx.solve(constraint.A.transpose());
  Matrix m = constraint.A * xtx_inv_at;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
  }
  std::optional<SpdMatrix> m_spd;
  try {
    m_spd.emplace(m);
  } catch (const SingularMatrixError&) {
    throw PreconditionError("linreg: constraint matrix A is not of full row rank");
  }

  auto excess = constraint.A * std::span<const double>(f.beta_hat);
  for (std::size_t i = 0; i < d; ++i) excess[i] -= constraint.psi[i];
  const auto multiplier = m_spd->solve(excess);
  f.constraint_quad = dot(excess, multiplier);
  const auto shift = xtx_inv_at * std::span<const double>(multiplier);
  f.beta_hat_psi = f.beta_hat;
  for (std::size_t j = 0; j < p; ++j) f.beta_hat_psi[j] -= shift[j];

  const auto r_psi = residuals(data, f.beta_hat_psi);
  f.sigma2_hat_psi = dot(r_psi, r_psi) / static_cast<double>(n);
  f.a = f.sigma2_hat_psi;
  const auto projected = data.X.transpose() * std::span<const double>(r_psi);
  f.b = xtx.inverse_quad_form(projected) / static_cast<double>(n);

  const double df_resid = static_cast<double>(n - p);
  f.F_stat = (f.constraint_quad / static_cast<double>(d)) / (f.sse / df_resid);
  f.degenerate = !(f.b > 1e-13 * f.a);
  return f;
}

std::vector<double> LinReg::sufficient_statistic(const Data& data) {
  auto u = data.X.transpose() * std::span<const double>(data.y);
  u.push_back(dot(data.y, data.y));
  return u;
}

std::vector<double> LinReg::constrained_sufficient_statistic(const Data& data, const Fit& fit) {
  const Matrix xtx = gram(data.X);
  auto u = xtx * std::span<const double>(fit.beta_hat_psi);
  const double quad = dot(fit.beta_hat_psi, u);
  u.push_back(static_cast<double>(data.n()) * fit.sigma2_hat_psi + quad);
  return u;
}

std::vector<double> LinReg::canonical_mle(const Data& data, std::span<const double> u) {
  const std::size_t p = data.p();
  if (u.size() != p + 1) throw PreconditionError("linreg: sufficient statistic has length p + 1");
  const SpdMatrix xtx = factor_design(data.X);
  const auto xy = u.first(p);
  const auto beta = xtx.solve(xy);
  const double sigma2 = (u[p] - dot(xy, beta)) / static_cast<double>(data.n());
  std::vector<double> phi(p + 1);
  for (std::size_t j = 0; j < p; ++j) phi[j] = beta[j] / sigma2;
  phi[p] = -0.5 / sigma2;
  return phi;
}

std::vector<double> LinReg::constrained_canonical(const Fit& fit) {
  std::vector<double> phi(fit.beta_hat_psi.size() + 1);
  for (std::size_t j = 0; j < fit.beta_hat_psi.size(); ++j) {
    phi[j] = fit.beta_hat_psi[j] / fit.sigma2_hat_psi;
  }
  phi.back() = -0.5 / fit.sigma2_hat_psi;
  return phi;
}

LineDensity LinReg::line_density(const Fit& fit) {
  if (fit.degenerate) throw DegenerateError("linreg: b = 0, hypothesis holds at the MLE");
  return LineDensity::quadratic(fit.d, fit.a, fit.b, 0.5 * (fit.n - fit.p - 2));
}

double LinReg::closed_form_pvalue(const Fit& fit) {
  return f_sf(fit.F_stat, FParams(fit.d, fit.n - fit.p));
}

double LinReg::log_likelihood(const Data& data, std::span<const double> beta, double sigma2) {
  const auto r = residuals(data, beta);
  const double n = static_cast<double>(data.n());
  return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * dot(r, r) / sigma2;
}

ComparisonStatistics LinReg::comparison_statistics(const Data& data, const Hypothesis& constraint) {
  const auto f = fit(data, constraint);
  // Observed information is block diagonal at the MLE with beta block
  // X^T X / sigma2_hat, so V1 = sigma2_hat A (X^T X)^{-1} A^T.
  ComparisonStatistics out;
  out.df = f.d;
  out.wald = f.constraint_quad / f.sigma2_hat;
  out.lrt = std::max(0.0, static_cast<double>(f.n) * std::log(f.sigma2_hat_psi / f.sigma2_hat));
  return out;
}

}  // namespace dirf
