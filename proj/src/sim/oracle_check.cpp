#include "dirf/errors.hpp"
#include "dirf/sim.hpp"

#include <cmath>
#include <exception>
#include <limits>

namespace dirf::sim {

namespace {

int uniform_int(CounterRng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng.next_u64() % span);
}

double log_uniform(CounterRng& rng, double lo, double hi) {
  return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

bool singular(const LineDensity& density) {
  return std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, QuadraticPower>) {
          return form.exponent < 0.0;
        } else {
          for (const auto& f : form.factors) {
            if (f.root == density.t_max() && f.exponent < 0.0) return true;
          }
          return false;
        }
      },
      density.form());
}

template <ExpFamModel M>
void compare(const typename M::Data& data, const typename M::Hypothesis& hyp,
             const OracleOptions& options, OracleCase& c) {
  const auto fit = M::fit(data, hyp);
  if (M::is_degenerate(fit)) {
    c.error = "degenerate instance";
    return;
  }
  const auto density = M::line_density(fit);
  c.endpoint_singular = singular(density);
  c.tolerance = c.endpoint_singular ? options.tol_singular : options.tol_regular;
  const auto result = directional_test<M>(data, hyp, Method::both);
  c.p_quadrature = result.p;
  c.p_closed = *result.diagnostics.closed_form_p;
  const double diff = std::fabs(c.p_quadrature - c.p_closed);
  c.rel_diff = c.p_closed > 0.0 ? diff / c.p_closed : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  c.passed = c.rel_diff <= c.tolerance;
}

void exp_rates_case(CounterRng& rng, const OracleOptions& options, OracleCase& c) {
  const int n1 = uniform_int(rng, 1, 30);
  const int n2 = uniform_int(rng, 1, 30);
  const double theta1 = log_uniform(rng, 0.3, 3.0);
  double u1 = 0.0, u2 = 0.0;
  for (int i = 0; i < n1; ++i) u1 += rng.exponential(theta1);
  for (int i = 0; i < n2; ++i) u2 += rng.exponential(1.0);
  const double psi = log_uniform(rng, 0.3, 3.0);
  compare<ExpRates>(ExpRatesData(u1, u2, n1, n2), psi, options, c);
}

void norm_var_case(CounterRng& rng, const OracleOptions& options, OracleCase& c) {
  const int n1 = uniform_int(rng, 2, 30);
  const int n2 = uniform_int(rng, 2, 30);
  const double sd1 = log_uniform(rng, 0.5, 2.0);
  std::vector<double> g1(static_cast<std::size_t>(n1)), g2(static_cast<std::size_t>(n2));
  for (double& y : g1) y = 1.0 + sd1 * rng.normal();
  for (double& y : g2) y = -1.0 + rng.normal();
  const double psi = log_uniform(rng, 0.25, 4.0);
  compare<NormVar>(NormVarData::from_samples(g1, g2), psi, options, c);
}

void linreg_case(CounterRng& rng, const OracleOptions& options, OracleCase& c) {
  const int p = uniform_int(rng, 1, 6);
  const int n = uniform_int(rng, p + 2, 50);
  const int d = uniform_int(rng, 1, p);
  Matrix X(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    for (std::size_t j = 1; j < X.cols(); ++j) X(i, j) = rng.normal();
  }
  std::vector<double> beta(static_cast<std::size_t>(p));
  for (double& b : beta) b = rng.normal();
  auto y = X * std::span<const double>(beta);
  for (double& v : y) v += rng.normal();
  Matrix A(static_cast<std::size_t>(d), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = rng.normal();
  }
  auto psi = A * std::span<const double>(beta);
  for (double& v : psi) v += 0.5 * rng.normal();
  compare<LinReg>(RegressionData(std::move(y), std::move(X)), LinearConstraint(A, psi), options, c);
}

void mvn_case(CounterRng& rng, const OracleOptions& options, OracleCase& c) {
  const int p = uniform_int(rng, 1, 6);
  const int n = uniform_int(rng, p + 2, 50);
  Matrix mix(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < mix.rows(); ++i) {
    for (std::size_t j = 0; j < mix.cols(); ++j) mix(i, j) = (i == j ? 1.0 : 0.0) + 0.4 * rng.normal();
  }
  Matrix Y(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  std::vector<double> z(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < Y.rows(); ++i) {
    for (double& v : z) v = rng.normal();
    const auto row = mix * std::span<const double>(z);
    for (std::size_t j = 0; j < Y.cols(); ++j) Y(i, j) = row[j];
  }
  std::vector<double> psi(static_cast<std::size_t>(p));
  for (double& v : psi) v = 0.3 * rng.normal();
  compare<MvnMean>(MvnData(std::move(Y)), psi, options, c);
}

}  // namespace

std::string to_string(OracleModel model) {
  switch (model) {
    case OracleModel::exp_rates: return "exp-rates";
    case OracleModel::norm_var: return "norm-var";
    case OracleModel::linreg: return "linreg";
    case OracleModel::mvn_mean: return "mvn-mean";
  }
  return "unknown";
}

OracleModel oracle_model_from_string(const std::string& name) {
  for (auto m : {OracleModel::exp_rates, OracleModel::norm_var, OracleModel::linreg,
                 OracleModel::mvn_mean}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown model '" + name + "'");
}

std::vector<OracleCase> oracle_check(OracleModel model, const OracleOptions& options) {
  if (options.cases < 1) throw PreconditionError("validate: case count must be >= 1");
  std::vector<OracleCase> out(static_cast<std::size_t>(options.cases));
  for (int i = 0; i < options.cases; ++i) {
    OracleCase& c = out[static_cast<std::size_t>(i)];
    c.model = model;
    c.index = i;
    CounterRng rng(options.seed, static_cast<std::uint64_t>(i),
                   static_cast<std::uint32_t>(model) + 1);
    try {
      switch (model) {
        case OracleModel::exp_rates: exp_rates_case(rng, options, c); break;
        case OracleModel::norm_var: norm_var_case(rng, options, c); break;
        case OracleModel::linreg: linreg_case(rng, options, c); break;
        case OracleModel::mvn_mean: mvn_case(rng, options, c); break;
      }
    } catch (const std::exception& e) {
      c.passed = false;
      c.error = e.what();
    }
  }
  return out;
}

}  // namespace dirf::sim
