#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dirf {

/// (1 - t / root)^exponent
struct LinearFactor {
  double root;
  double exponent;
};

struct LinearFactors {
  std::vector<LinearFactor> factors;
};

/// (a - b t^2)^exponent
struct QuadraticPower {
  double a;
  double b;
  double exponent;
};

/// The unnormalized density t^{d-1} h(t) of the score variable along the
/// line from the hypothesis point (t = 0) through the observed point (t = 1).
///
/// Every density in this library is either a product of powers of linear
/// factors (the two-group scale models) or a power of a quadratic in t (the
/// Gaussian location models). The support is [0, t_max], where t_max is the
/// first positive root of h.
class LineDensity {
 public:
  /// Throws PreconditionError if a root is zero, an exponent is <= -1, or
  /// no root is positive (unbounded support).
  static LineDensity linear(int d, std::vector<LinearFactor> factors);
  /// Throws PreconditionError unless a > 0, b > 0 and exponent > -1.
  static LineDensity quadratic(int d, double a, double b, double exponent);

  int d() const noexcept { return d_; }
  double t_max() const noexcept { return t_max_; }
  const std::variant<LinearFactors, QuadraticPower>& form() const noexcept { return form_; }

  /// log(t^{d-1} h(t)) for t in (0, t_max).
  double log_value(double t) const;

 private:
  LineDensity(int d, double t_max, std::variant<LinearFactors, QuadraticPower> form)
      : d_(d), t_max_(t_max), form_(std::move(form)) {}

  int d_;
  double t_max_;
  std::variant<LinearFactors, QuadraticPower> form_;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_floor = 1e-300;
  /// Refinement stops once a level would exceed this many nodes.
  int max_nodes = 1 << 16;
};

/// Integral reported as value * exp(log_scale).
struct ScaledIntegral {
  double value = 0.0;
  double abs_error = 0.0;
  double log_scale = 0.0;
  int nodes = 0;
};

/// Integral of t^{d-1} h(t) over [lo, hi], 0 <= lo <= hi <= t_max.
/// Throws DomainError on bad limits and AccuracyError when refinement is
/// exhausted.
double integrate_line_density(const LineDensity& density, double lo, double hi,
                              const QuadratureOptions& options = {});

/// Same integral scaled by exp(-log_scale); use a shared scale to form
/// ratios of integrals whose absolute size would overflow.
ScaledIntegral integrate_line_density_scaled(const LineDensity& density, double lo, double hi,
                                             double log_scale,
                                             const QuadratureOptions& options = {});

/// Approximate maximum of log(t^{d-1} h(t)) over the support, sampled on a
/// coarse grid.
double reference_log_scale(const LineDensity& density);

enum class Method { quadrature, closed_form, both };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct Diagnostics {
  /// s_psi = 0: the data sit exactly at the hypothesis.
  bool degenerate = false;
  /// t_max <= 1: the observed point is on the support boundary.
  bool at_boundary = false;
  std::optional<double> closed_form_p;
  /// |p_quadrature - p_closed_form|, only for Method::both.
  std::optional<double> discrepancy;
  std::vector<std::string> warnings;
};

struct DirectionalResult {
  double p = 1.0;
  /// Numerator and denominator share a common scale factor that cancels in p.
  double numerator = 1.0;
  double denominator = 1.0;
  double t_max = 0.0;
  Method method = Method::quadrature;
  double est_abs_error = 0.0;
  Diagnostics diagnostics;
};

/// Ratio of the integral over [1, t_max] to the integral over [0, t_max].
/// Returns p = 0 with at_boundary set when t_max <= 1.
DirectionalResult directional_pvalue(const LineDensity& density,
                                     const QuadratureOptions& options = {});

}  // namespace dirf
