#include "dirf/core.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dirf {

std::vector<double> CenteredLine::at(double t) const {
  std::vector<double> s(s_psi_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (1.0 - t) * s_psi_[i];
  return s;
}

CenteredLine build_centered_line(std::span<const double> u_psi, std::span<const double> u_obs,
                                 int d) {
  if (u_psi.size() != u_obs.size()) {
    throw PreconditionError("build_centered_line: u_psi and u_obs differ in length");
  }
  if (d < 1) throw PreconditionError("build_centered_line: d must be >= 1");
  std::vector<double> s(u_psi.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = u_psi[i] - u_obs[i];
    scale = std::max({scale, std::fabs(u_psi[i]), std::fabs(u_obs[i])});
  }
  const double magnitude = norm2(s);
  const bool degenerate = magnitude == 0.0 || magnitude <= 1e-14 * scale;
  return CenteredLine(std::move(s), d, degenerate);
}

double wald_statistic(const SpdMatrix& observed_information, std::span<const double> difference) {
  const std::size_t d = difference.size();
  if (d == 0 || d > observed_information.dim()) {
    throw PreconditionError("wald_statistic: interest dimension out of range");
  }
  const Matrix inv = observed_information.inverse();
  Matrix block(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) block(i, j) = inv(i, j);
  }
  return SpdMatrix(std::move(block)).inverse_quad_form(difference);
}

}  // namespace dirf
