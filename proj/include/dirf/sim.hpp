#pragma once

#include "dirf/models/exp_rates.hpp"
#include "dirf/models/linreg.hpp"
#include "dirf/models/mvn_mean.hpp"
#include "dirf/models/norm_var.hpp"
#include "dirf/numerics.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dirf::sim {

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream. The key is the 64-bit seed; the counter holds the
/// block index, a stream id and the 64-bit replicate index, so every
/// replicate draws the same numbers whatever thread evaluates it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replicate, std::uint32_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on (0, 1), never 0 or 1.
  double uniform();
  double normal();
  /// Exponential with the given rate.
  double exponential(double rate);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t replicate_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// Standard normal quantile, accurate to a few ulps on (0, 1).
double normal_quantile(double u);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// theta1 = psi * theta2.
struct ExpRatesNull {
  int n1 = 5;
  int n2 = 5;
  double theta2 = 1.0;
  double psi = 1.0;
};

/// sigma1^2 = psi * sigma2^2.
struct NormVarNull {
  int n1 = 5;
  int n2 = 7;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma2_2 = 1.0;
  double psi = 1.0;
};

/// Fixed design; beta must satisfy A beta = psi.
struct LinRegNull {
  Matrix X;
  std::vector<double> beta;
  double sigma = 1.0;
  Matrix A;
  std::vector<double> psi;
};

/// Hypothesis mu = psi, data drawn at mu with precision Lambda.
struct MvnNull {
  int n = 10;
  std::vector<double> mu;
  Matrix precision;
};

using NullModel = std::variant<ExpRatesNull, NormVarNull, LinRegNull, MvnNull>;

enum class SimMethod { directional_quadrature, directional_closed, wald, lrt, one_tailed_f };

std::string to_string(SimMethod method);
SimMethod sim_method_from_string(const std::string& name);
std::string model_name(const NullModel& model);

struct SimConfig {
  NullModel model;
  int replicates = 1000;
  std::uint64_t seed = 0;
  std::vector<SimMethod> methods;
  /// 0 means DIRF_THREADS, falling back to the hardware concurrency.
  int workers = 0;
};

/// Throws PreconditionError on R < 1, parameters off the hypothesis, a
/// method the model cannot provide, or an empty method list.
void validate_config(const SimConfig& config);

struct TwoGroupSample {
  std::vector<double> group1;
  std::vector<double> group2;
};

using Dataset = std::variant<TwoGroupSample, RegressionData, MvnData>;

/// Deterministic in (seed, replicate_index).
Dataset sample_under_null(const SimConfig& config, std::uint64_t replicate_index);

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

/// Two-sided KS distance of sorted values from the uniform CDF.
double ks_statistic(const std::vector<double>& sorted_pvalues);

inline constexpr std::array<double, 3> kAlphas = {0.01, 0.05, 0.10};

struct MethodSummary {
  SimMethod method;
  std::vector<double> sorted_pvalues;
  double ks = 0.0;
  std::array<double, 3> rejection_rates{};
  double max_p = 0.0;
};

/// Directional p-values restricted to replicates with W >= threshold,
/// rescaled as (1 - G(W)) / (1 - G(threshold)). Two-group models only.
struct ConditionalSummary {
  int count = 0;
  double ks = 0.0;
};

struct ReplicateIssue {
  std::uint64_t replicate;
  std::string message;
};

struct CalibrationReport {
  std::string model;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<MethodSummary> methods;
  std::optional<ConditionalSummary> conditional_upper;
  /// s_psi = 0 up to 1e-13; excluded from the summaries.
  std::vector<std::uint64_t> degenerate;
  /// Replicates whose evaluation threw; excluded from the summaries.
  std::vector<ReplicateIssue> failures;
};

/// Number of worker threads used for `requested` (0 = environment default).
int resolve_workers(int requested);

CalibrationReport run_calibration(const SimConfig& config);

// ---------------------------------------------------------------------------
// Quadrature against closed form
// ---------------------------------------------------------------------------

enum class OracleModel { exp_rates, norm_var, linreg, mvn_mean };

std::string to_string(OracleModel model);
OracleModel oracle_model_from_string(const std::string& name);

struct OracleCase {
  OracleModel model;
  int index = 0;
  double p_quadrature = 0.0;
  double p_closed = 0.0;
  /// |p_quadrature - p_closed| / p_closed
  double rel_diff = 0.0;
  /// Negative density exponent: integrable singularity at t_max.
  bool endpoint_singular = false;
  double tolerance = 0.0;
  bool passed = false;
  std::string error;
};

struct OracleOptions {
  int cases = 200;
  std::uint64_t seed = 7;
  /// Tolerance when the density diverges at t_max.
  double tol_singular = 1e-7;
  /// Tolerance otherwise.
  double tol_regular = 1e-8;
};

/// Random instances under mild alternatives, each compared quadrature
/// against closed form. Deterministic in the seed.
std::vector<OracleCase> oracle_check(OracleModel model, const OracleOptions& options);

}  // namespace dirf::sim
