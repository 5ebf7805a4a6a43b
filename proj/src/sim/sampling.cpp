#include "dirf/errors.hpp"
#include "dirf/sim.hpp"

#include <algorithm>
#include <cmath>

namespace dirf::sim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

std::string to_string(SimMethod method) {
  switch (method) {
    case SimMethod::directional_quadrature: return "directional_quadrature";
    case SimMethod::directional_closed: return "directional_closed";
    case SimMethod::wald: return "wald";
    case SimMethod::lrt: return "lrt";
    case SimMethod::one_tailed_f: return "one_tailed_f";
  }
  return "unknown";
}

SimMethod sim_method_from_string(const std::string& name) {
  for (auto m : {SimMethod::directional_quadrature, SimMethod::directional_closed, SimMethod::wald,
                 SimMethod::lrt, SimMethod::one_tailed_f}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown simulation method '" + name + "'");
}

std::string model_name(const NullModel& model) {
  return std::visit(Overloaded{[](const ExpRatesNull&) { return std::string(ExpRates::name); },
                               [](const NormVarNull&) { return std::string(NormVar::name); },
                               [](const LinRegNull&) { return std::string(LinReg::name); },
                               [](const MvnNull&) { return std::string(MvnMean::name); }},
                    model);
}

void validate_config(const SimConfig& config) {
  if (config.replicates < 1) throw PreconditionError("simulate: replicate count must be >= 1");
  if (config.methods.empty()) throw PreconditionError("simulate: no methods requested");
  const bool two_group = std::holds_alternative<ExpRatesNull>(config.model) ||
                         std::holds_alternative<NormVarNull>(config.model);
  if (!two_group && std::ranges::find(config.methods, SimMethod::one_tailed_f) != config.methods.end()) {
    throw PreconditionError("simulate: one_tailed_f is defined for exp-rates and norm-var only");
  }
  std::visit(
      Overloaded{
          [](const ExpRatesNull& m) {
            if (m.n1 < 1 || m.n2 < 1) throw PreconditionError("simulate: group sizes must be >= 1");
            if (!positive_finite(m.theta2) || !positive_finite(m.psi)) {
              throw PreconditionError("simulate: rates and psi must be positive");
            }
          },
          [](const NormVarNull& m) {
            if (m.n1 < 2 || m.n2 < 2) throw PreconditionError("simulate: group sizes must be >= 2");
            if (!positive_finite(m.sigma2_2) || !positive_finite(m.psi)) {
              throw PreconditionError("simulate: variances and psi must be positive");
            }
          },
          [](const LinRegNull& m) {
            if (m.beta.size() != m.X.cols()) throw PreconditionError("simulate: beta length must match X");
            if (m.A.cols() != m.X.cols() || m.A.rows() != m.psi.size()) {
              throw PreconditionError("simulate: A and psi shapes do not match X");
            }
            if (!positive_finite(m.sigma)) throw PreconditionError("simulate: sigma must be positive");
            const auto ab = m.A * std::span<const double>(m.beta);
            for (std::size_t i = 0; i < ab.size(); ++i) {
              const double scale = std::max(1.0, std::fabs(m.psi[i]));
              if (std::fabs(ab[i] - m.psi[i]) > 1e-12 * scale) {
                throw PreconditionError("simulate: generating beta does not satisfy A beta = psi");
              }
            }
          },
          [](const MvnNull& m) {
            if (m.mu.empty()) throw PreconditionError("simulate: mu is empty");
            if (m.precision.rows() != m.mu.size() || m.precision.cols() != m.mu.size()) {
              throw PreconditionError("simulate: precision matrix must be p x p");
            }
            if (static_cast<std::size_t>(m.n) < m.mu.size() + 1) {
              throw PreconditionError("simulate: need n >= p + 1");
            }
            SpdMatrix check(m.precision);
          }},
      config.model);
}

Dataset sample_under_null(const SimConfig& config, std::uint64_t replicate_index) {
  CounterRng rng(config.seed, replicate_index);
  return std::visit(
      Overloaded{
          [&](const ExpRatesNull& m) -> Dataset {
            TwoGroupSample s;
            const double theta1 = m.psi * m.theta2;
            for (int i = 0; i < m.n1; ++i) s.group1.push_back(rng.exponential(theta1));
            for (int i = 0; i < m.n2; ++i) s.group2.push_back(rng.exponential(m.theta2));
            return s;
          },
          [&](const NormVarNull& m) -> Dataset {
            TwoGroupSample s;
            const double sd1 = std::sqrt(m.psi * m.sigma2_2);
            const double sd2 = std::sqrt(m.sigma2_2);
            for (int i = 0; i < m.n1; ++i) s.group1.push_back(m.mu1 + sd1 * rng.normal());
            for (int i = 0; i < m.n2; ++i) s.group2.push_back(m.mu2 + sd2 * rng.normal());
            return s;
          },
          [&](const LinRegNull& m) -> Dataset {
            auto y = m.X * std::span<const double>(m.beta);
            for (double& v : y) v += m.sigma * rng.normal();
            return RegressionData(std::move(y), m.X);
          },
          [&](const MvnNull& m) -> Dataset {
            const std::size_t p = m.mu.size();
            const SpdMatrix covariance(SpdMatrix(m.precision).inverse());
            const Matrix& L = covariance.cholesky_factor();
            Matrix Y(static_cast<std::size_t>(m.n), p);
            std::vector<double> z(p);
            for (std::size_t i = 0; i < Y.rows(); ++i) {
              for (double& v : z) v = rng.normal();
              for (std::size_t j = 0; j < p; ++j) {
                double acc = m.mu[j];
                for (std::size_t k = 0; k <= j; ++k) acc += L(j, k) * z[k];
                Y(i, j) = acc;
              }
            }
            return MvnData(std::move(Y));
          }},
      config.model);
}

}  // namespace dirf::sim
