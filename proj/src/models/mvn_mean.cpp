#include "dirf/models/mvn_mean.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace dirf {

namespace {

// n^{-1} sum (y_i - c)(y_i - c)^T
Matrix scatter_about(const Matrix& Y, std::span<const double> center) {
  const std::size_t n = Y.rows();
  const std::size_t p = Y.cols();
  Matrix s(p, p);
  std::vector<double> dev(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) dev[j] = Y(i, j) - center[j];
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j; k < p; ++k) s(j, k) += dev[j] * dev[k];
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      s(j, k) /= static_cast<double>(n);
      s(k, j) = s(j, k);
    }
  }
  return s;
}

std::vector<double> column_means(const Matrix& Y) {
  std::vector<double> m(Y.cols(), 0.0);
  for (std::size_t i = 0; i < Y.rows(); ++i) {
    for (std::size_t j = 0; j < Y.cols(); ++j) m[j] += Y(i, j);
  }
  for (double& x : m) x /= static_cast<double>(Y.rows());
  return m;
}

std::vector<double> precision_phi(const SpdMatrix& covariance, std::span<const double> mean) {
  const std::size_t p = mean.size();
  const Matrix precision = covariance.inverse();
  std::vector<double> phi = precision * mean;
  phi.reserve(p + p * p);
  for (double x : precision.data()) phi.push_back(-0.5 * x);
  return phi;
}

}  // namespace

MvnData::MvnData(Matrix Y_) : Y(std::move(Y_)) {
  if (Y.cols() == 0) throw PreconditionError("mvn-mean: sample matrix has no columns");
  if (Y.rows() < Y.cols() + 1) {
    throw PreconditionError("mvn-mean: need n >= p + 1 observations (n = " +
                            std::to_string(Y.rows()) + ", p = " + std::to_string(Y.cols()) + ")");
  }
}

MvnFit MvnMean::fit(const Data& data, const Hypothesis& psi) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  if (psi.size() != p) {
    throw PreconditionError("mvn-mean: psi has length " + std::to_string(psi.size()) +
                            " but data have " + std::to_string(p) + " columns");
  }
  MvnFit f;
  f.n = static_cast<int>(n);
  f.p = static_cast<int>(p);
  f.psi = psi;
  f.ybar = column_means(data.Y);
  f.v.resize(p);
  for (std::size_t j = 0; j < p; ++j) f.v[j] = f.ybar[j] - psi[j];
  f.B = scatter_about(data.Y, f.ybar);
  f.A = scatter_about(data.Y, psi);

  std::optional<SpdMatrix> b_spd;
  try {
    b_spd.emplace(f.B);
  } catch (const SingularMatrixError&) {
    throw PreconditionError("mvn-mean: sample covariance is singular (data lie in a lower-dimensional affine subspace)");
  }
  const SpdMatrix a_spd(f.A);
  if (b_spd->pivot_ratio() > 1e12) {
    f.warnings.push_back("mvn-mean: sample covariance is badly conditioned (Cholesky pivot ratio > 1e12)");
  }
  f.C = dot(f.v, spd_solve(a_spd, f.v));
  f.quad_B = b_spd->inverse_quad_form(f.v);
  f.T2 = (static_cast<double>(n) - 1.0) * f.quad_B;
  f.log_det_A = a_spd.log_determinant();
  f.log_det_B = b_spd->log_determinant();
  f.degenerate = !(f.C > 1e-13);
  return f;
}

std::vector<double> MvnMean::sufficient_statistic(const Data& data) {
  const std::size_t n = data.n();
  const std::size_t p = data.p();
  std::vector<double> u(p + p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      u[j] += data.Y(i, j);
      for (std::size_t k = 0; k < p; ++k) u[p + j * p + k] += data.Y(i, j) * data.Y(i, k);
    }
  }
  return u;
}

std::vector<double> MvnMean::constrained_sufficient_statistic(const Data& data, const Fit& fit) {
  const std::size_t p = data.p();
  const double n = static_cast<double>(data.n());
  std::vector<double> u(p + p * p);
  for (std::size_t j = 0; j < p; ++j) {
    u[j] = n * fit.psi[j];
    for (std::size_t k = 0; k < p; ++k) {
      u[p + j * p + k] = n * (fit.A(j, k) + fit.psi[j] * fit.psi[k]);
    }
  }
  return u;
}

std::vector<double> MvnMean::canonical_mle(const Data& data, std::span<const double> u) {
  const std::size_t p = data.p();
  const double n = static_cast<double>(data.n());
  if (u.size() != p + p * p) throw PreconditionError("mvn-mean: sufficient statistic has length p + p^2");
  std::vector<double> mean(p);
  for (std::size_t j = 0; j < p; ++j) mean[j] = u[j] / n;
  Matrix cov(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) cov(j, k) = u[p + j * p + k] / n - mean[j] * mean[k];
  }
  return precision_phi(SpdMatrix(cov), mean);
}

std::vector<double> MvnMean::constrained_canonical(const Fit& fit) {
  return precision_phi(SpdMatrix(fit.A), fit.psi);
}

LineDensity MvnMean::line_density(const Fit& fit) {
  if (fit.degenerate) throw DegenerateError("mvn-mean: psi equals the sample mean");
  return LineDensity::quadratic(fit.p, 1.0, fit.C, 0.5 * (fit.n - fit.p - 2));
}

double MvnMean::closed_form_pvalue(const Fit& fit) {
  const double n = fit.n;
  const double p = fit.p;
  return f_sf((n - p) / p * fit.quad_B, FParams(p, n - p));
}

ComparisonStatistics MvnMean::comparison_statistics(const Data& data, const Hypothesis& psi) {
  const auto f = fit(data, psi);
  // Mean block of the observed information at the MLE is n B^{-1}, and the
  // mean/precision cross block vanishes there, so V1 = B / n.
  ComparisonStatistics out;
  out.df = f.p;
  out.wald = static_cast<double>(f.n) * f.quad_B;
  out.lrt = std::max(0.0, static_cast<double>(f.n) * (f.log_det_A - f.log_det_B));
  return out;
}

}  // namespace dirf
