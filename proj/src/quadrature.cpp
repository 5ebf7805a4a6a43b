#include "dirf/quadrature.hpp"

#include "dirf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dirf {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
// Nodes beyond |tau| = 4.5 sit within ~1e-61 of an endpoint; for exponents
// above -1/2 their contribution is far below double precision.
constexpr double kTauMax = 4.5;
constexpr int kMinLevel = 3;

double log_cosh(double u) {
  const double a = std::fabs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

struct TanhSinhOutcome {
  double value;
  double abs_error;
  int nodes;
  bool converged;
};

// Tanh-sinh quadrature of exp(log_f(x, x - lo, hi - x) - shift) over
// [lo, hi]. Distances to both endpoints are passed exactly so integrands can
// resolve endpoint behaviour without cancellation.
template <class LogF>
TanhSinhOutcome tanh_sinh(const LogF& log_f, double lo, double hi, double shift,
                          const QuadratureOptions& options) {
  const double width = hi - lo;
  const double half = 0.5 * width;
  const double log_half_weight = std::log(half * kHalfPi);

  auto term = [&](double tau) -> double {
    const double u = kHalfPi * std::sinh(tau);
    const double e = std::exp(-2.0 * std::fabs(u));
    // Distance to the nearer endpoint is half * (1 - tanh|u|).
    const double near = half * 2.0 * e / (1.0 + e);
    double dist_lo;
    double dist_hi;
    double x;
    if (tau >= 0.0) {
      dist_hi = near;
      dist_lo = width - near;
      x = hi - near;
    } else {
      dist_lo = near;
      dist_hi = width - near;
      x = lo + near;
    }
    if (!(dist_lo > 0.0) || !(dist_hi > 0.0)) return 0.0;
    const double log_w = log_half_weight + std::log(std::cosh(tau)) - 2.0 * log_cosh(u);
    const double lf = log_f(x, dist_lo, dist_hi);
    if (std::isnan(lf)) return 0.0;
    return std::exp(lf - shift + log_w);
  };

  double h = 1.0;
  int nodes = 1;
  double sum = term(0.0);
  const int n0 = static_cast<int>(std::ceil(kTauMax / h));
  for (int j = 1; j <= n0; ++j) {
    const double tau = j * h;
    sum += term(tau) + term(-tau);
    nodes += 2;
  }
  double estimate = h * sum;
  double error = std::numeric_limits<double>::infinity();

  for (int level = 1;; ++level) {
    const double next_h = 0.5 * h;
    const int count = static_cast<int>(std::ceil(kTauMax / next_h));
    const int new_nodes = count;  // odd multiples on both sides, roughly
    if (nodes + new_nodes > options.max_nodes) break;
    double added = 0.0;
    for (int j = 1; j <= count; j += 2) {
      const double tau = j * next_h;
      added += term(tau) + term(-tau);
      nodes += 2;
    }
    h = next_h;
    sum += added;
    const double refined = h * sum;
    error = std::fabs(refined - estimate);
    estimate = refined;
    if (level >= kMinLevel &&
        (error <= options.rel_tol * std::fabs(estimate) || error <= options.abs_floor)) {
      return {estimate, error, nodes, true};
    }
  }
  return {estimate, error, nodes, false};
}

}  // namespace

LineDensity LineDensity::linear(int d, std::vector<LinearFactor> factors) {
  if (d < 1) throw PreconditionError("LineDensity: dimension d must be >= 1");
  double t_max = std::numeric_limits<double>::infinity();
  for (const auto& f : factors) {
    if (!(f.root != 0.0) || !std::isfinite(f.root)) {
      throw PreconditionError("LineDensity: linear factor roots must be finite and nonzero");
    }
    if (!(f.exponent > -1.0)) {
      throw PreconditionError("LineDensity: exponents must exceed -1 for integrability");
    }
    if (f.root > 0.0) t_max = std::min(t_max, f.root);
  }
  if (!std::isfinite(t_max)) {
    throw PreconditionError("LineDensity: no positive root, support is unbounded");
  }
  return LineDensity(d, t_max, LinearFactors{std::move(factors)});
}

LineDensity LineDensity::quadratic(int d, double a, double b, double exponent) {
  if (d < 1) throw PreconditionError("LineDensity: dimension d must be >= 1");
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw PreconditionError("LineDensity: quadratic coefficients must be positive");
  }
  if (!(exponent > -1.0)) {
    throw PreconditionError("LineDensity: exponent must exceed -1 for integrability");
  }
  return LineDensity(d, std::sqrt(a / b), QuadraticPower{a, b, exponent});
}

double LineDensity::log_value(double t) const {
  double out = (d_ > 1) ? (d_ - 1) * std::log(t) : 0.0;
  if (const auto* lf = std::get_if<LinearFactors>(&form_)) {
    for (const auto& f : lf->factors) {
      if (f.exponent != 0.0) out += f.exponent * std::log1p(-t / f.root);
    }
  } else {
    const auto& q = std::get<QuadraticPower>(form_);
    if (q.exponent != 0.0) out += q.exponent * std::log(q.a - q.b * t * t);
  }
  return out;
}

double reference_log_scale(const LineDensity& density) {
  constexpr int kGrid = 64;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGrid; ++i) {
    const double t = density.t_max() * static_cast<double>(i) / kGrid;
    const double v = density.log_value(t);
    if (std::isfinite(v)) best = std::max(best, v);
  }
  return std::isfinite(best) ? best : 0.0;
}

ScaledIntegral integrate_line_density_scaled(const LineDensity& density, double lo, double hi,
                                             double log_scale,
                                             const QuadratureOptions& options) {
  const double t_max = density.t_max();
  if (!(lo >= 0.0) || !(hi <= t_max) || !(lo <= hi)) {
    std::ostringstream msg;
    msg << "integrate_line_density: need 0 <= lo <= hi <= t_max, got lo=" << lo
        << " hi=" << hi << " t_max=" << t_max;
    throw DomainError(msg.str());
  }
  if (lo == hi) return {0.0, 0.0, log_scale, 0};

  const int d = density.d();
  const bool hi_at_boundary = (hi == t_max);
  const bool lo_at_zero = (lo == 0.0);
  TanhSinhOutcome outcome{};

  if (const auto* lf = std::get_if<LinearFactors>(&density.form())) {
    const auto& factors = lf->factors;
    auto log_f = [&](double t, double dist_lo, double dist_hi) {
      double out = 0.0;
      if (d > 1) out += (d - 1) * std::log(lo_at_zero ? dist_lo : t);
      for (const auto& f : factors) {
        if (f.exponent == 0.0) continue;
        // Positive roots lie at or beyond hi; measure from hi to keep the
        // near-root distance exact.
        const double one_minus =
            f.root > 0.0 ? ((f.root - hi) + dist_hi) / f.root : (f.root - t) / f.root;
        out += f.exponent * std::log(one_minus);
      }
      return out;
    };
    outcome = tanh_sinh(log_f, lo, hi, log_scale, options);
  } else {
    // t = t_max sin(theta): a - b t^2 = a cos^2(theta), dt = t_max cos(theta).
    const auto& q = std::get<QuadraticPower>(density.form());
    const double theta_lo = lo_at_zero ? 0.0 : std::asin(std::min(1.0, lo / t_max));
    const double theta_hi = hi_at_boundary ? kHalfPi : std::asin(std::min(1.0, hi / t_max));
    const double cos_power = 2.0 * q.exponent + 1.0;
    const double constant = d * std::log(t_max) + q.exponent * std::log(q.a);
    auto log_f = [&](double theta, double dist_lo, double dist_hi) {
      double out = constant;
      if (d > 1) out += (d - 1) * std::log(std::sin(lo_at_zero ? dist_lo : theta));
      if (cos_power != 0.0) {
        const double c = hi_at_boundary ? std::sin(dist_hi) : std::cos(theta);
        out += cos_power * std::log(c);
      }
      return out;
    };
    outcome = tanh_sinh(log_f, theta_lo, theta_hi, log_scale, options);
  }

  if (!outcome.converged) {
    std::ostringstream msg;
    msg << "line-density quadrature did not reach rel_tol " << options.rel_tol << " on [" << lo
        << ", " << hi << "] after " << outcome.nodes << " nodes";
    throw AccuracyError(msg.str(), outcome.value * std::exp(log_scale),
                        outcome.abs_error * std::exp(log_scale));
  }
  return {outcome.value, outcome.abs_error, log_scale, outcome.nodes};
}

double integrate_line_density(const LineDensity& density, double lo, double hi,
                              const QuadratureOptions& options) {
  const double scale = reference_log_scale(density);
  const auto r = integrate_line_density_scaled(density, lo, hi, scale, options);
  return r.value * std::exp(scale);
}

std::string to_string(Method method) {
  switch (method) {
    case Method::quadrature: return "quadrature";
    case Method::closed_form: return "closed-form";
    case Method::both: return "both";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "quadrature") return Method::quadrature;
  if (name == "closed-form" || name == "closed_form") return Method::closed_form;
  if (name == "both") return Method::both;
  throw ParseError("unknown method '" + name + "' (expected quadrature, closed-form or both)");
}

DirectionalResult directional_pvalue(const LineDensity& density,
                                     const QuadratureOptions& options) {
  DirectionalResult result;
  result.method = Method::quadrature;
  result.t_max = density.t_max();
  const double scale = reference_log_scale(density);

  if (density.t_max() <= 1.0) {
    const auto whole = integrate_line_density_scaled(density, 0.0, density.t_max(), scale, options);
    result.p = 0.0;
    result.numerator = 0.0;
    result.denominator = whole.value;
    result.est_abs_error = 0.0;
    result.diagnostics.at_boundary = true;
    result.diagnostics.warnings.push_back(
        "observed point lies at or beyond the support boundary (t_max <= 1); p set to 0");
    return result;
  }

  const auto lower = integrate_line_density_scaled(density, 0.0, 1.0, scale, options);
  const auto upper =
      integrate_line_density_scaled(density, 1.0, density.t_max(), scale, options);
  const double denominator = lower.value + upper.value;
  if (!(denominator > 0.0)) {
    throw AccuracyError("directional_pvalue: denominator underflowed", 0.0, 0.0);
  }
  result.numerator = upper.value;
  result.denominator = denominator;
  result.p = upper.value / denominator;
  result.est_abs_error =
      (lower.value * upper.abs_error + upper.value * lower.abs_error) / (denominator * denominator);
  return result;
}

}  // namespace dirf
