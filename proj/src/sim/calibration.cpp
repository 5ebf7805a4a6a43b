#include "dirf/errors.hpp"
#include "dirf/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace dirf::sim {

namespace {

struct Outcome {
  std::vector<double> p;
  bool degenerate = false;
  bool upper = false;
  double conditional_p = 0.0;
  std::string error;
};

struct TwoGroupF {
  double W;
  double threshold;
  FParams g;
};

TwoGroupF two_group_f(const ExpRatesFit& f) { return {f.W, 1.0, FParams(2.0 * f.n1, 2.0 * f.n2)}; }
TwoGroupF two_group_f(const NormVarFit& f) {
  return {f.W, f.threshold, FParams(f.n2 - 1.0, f.n1 - 1.0)};
}

template <class Fit>
constexpr bool kTwoGroup = std::is_same_v<Fit, ExpRatesFit> || std::is_same_v<Fit, NormVarFit>;

template <ExpFamModel M>
void evaluate(const typename M::Data& data, const typename M::Hypothesis& hyp,
              const std::vector<SimMethod>& methods, Outcome& out) {
  const auto fit = M::fit(data, hyp);
  const auto first = directional_test<M>(data, hyp, Method::closed_form);
  if (first.diagnostics.degenerate) {
    out.degenerate = true;
    return;
  }
  std::optional<ComparisonStatistics> cmp;
  out.p.reserve(methods.size());
  for (SimMethod m : methods) {
    switch (m) {
      case SimMethod::directional_quadrature:
        out.p.push_back(directional_test<M>(data, hyp, Method::quadrature).p);
        break;
      case SimMethod::directional_closed:
        out.p.push_back(first.p);
        break;
      case SimMethod::wald:
      case SimMethod::lrt: {
        if (!cmp) cmp = M::comparison_statistics(data, hyp);
        const double stat = m == SimMethod::wald ? cmp->wald : cmp->lrt;
        out.p.push_back(chi2_sf(stat, cmp->df));
        break;
      }
      case SimMethod::one_tailed_f:
        if constexpr (kTwoGroup<typename M::Fit>) {
          const auto tg = two_group_f(fit);
          out.p.push_back(tg.W < tg.threshold ? f_cdf(tg.W, tg.g) : f_sf(tg.W, tg.g));
        } else {
          throw PreconditionError("one_tailed_f is defined for two-group models only");
        }
        break;
    }
  }
  if constexpr (kTwoGroup<typename M::Fit>) {
    const auto tg = two_group_f(fit);
    if (tg.W >= tg.threshold) {
      out.upper = true;
      out.conditional_p = f_sf(tg.W, tg.g) / f_sf(tg.threshold, tg.g);
    }
  }
}

Outcome run_replicate(const SimConfig& config, std::uint64_t index) {
  Outcome out;
  try {
    const Dataset data = sample_under_null(config, index);
    std::visit(
        [&](const auto& model) {
          using T = std::decay_t<decltype(model)>;
          if constexpr (std::is_same_v<T, ExpRatesNull>) {
            const auto& s = std::get<TwoGroupSample>(data);
            evaluate<ExpRates>(ExpRatesData::from_samples(s.group1, s.group2), model.psi,
                               config.methods, out);
          } else if constexpr (std::is_same_v<T, NormVarNull>) {
            const auto& s = std::get<TwoGroupSample>(data);
            evaluate<NormVar>(NormVarData::from_samples(s.group1, s.group2), model.psi,
                              config.methods, out);
          } else if constexpr (std::is_same_v<T, LinRegNull>) {
            evaluate<LinReg>(std::get<RegressionData>(data), LinearConstraint(model.A, model.psi),
                             config.methods, out);
          } else {
            evaluate<MvnMean>(std::get<MvnData>(data), model.mu, config.methods, out);
          }
        },
        config.model);
  } catch (const std::exception& e) {
    out = Outcome{};
    out.error = e.what();
  }
  return out;
}

MethodSummary summarize(SimMethod method, std::vector<double> values) {
  MethodSummary s;
  s.method = method;
  std::ranges::sort(values);
  s.ks = ks_statistic(values);
  for (std::size_t k = 0; k < kAlphas.size(); ++k) {
    const auto below = std::ranges::upper_bound(values, kAlphas[k]) - values.begin();
    s.rejection_rates[k] = static_cast<double>(below) / static_cast<double>(values.size());
  }
  s.max_p = values.back();
  s.sorted_pvalues = std::move(values);
  return s;
}

}  // namespace

double ks_statistic(const std::vector<double>& sorted) {
  if (sorted.empty()) throw PreconditionError("ks_statistic: empty input");
  const double r = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = sorted[i];
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("ks_statistic: values must lie in [0, 1]");
    if (i > 0 && p < sorted[i - 1]) throw PreconditionError("ks_statistic: input must be sorted");
    const double idx = static_cast<double>(i + 1);
    d = std::max({d, idx / r - p, p - (idx - 1.0) / r});
  }
  return d;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("DIRF_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      throw PreconditionError("DIRF_THREADS must be a positive integer");
    }
    return static_cast<int>(std::min<long>(cap, 1024));
  }
  return hw;
}

CalibrationReport run_calibration(const SimConfig& config) {
  validate_config(config);
  const auto reps = static_cast<std::size_t>(config.replicates);
  std::vector<Outcome> outcomes(reps);
  const int workers = std::min<int>(resolve_workers(config.workers), config.replicates);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < reps; i = next++) outcomes[i] = run_replicate(config, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  CalibrationReport report;
  report.model = model_name(config.model);
  report.replicates = config.replicates;
  report.seed = config.seed;
  std::vector<std::vector<double>> per_method(config.methods.size());
  std::vector<double> conditional;
  for (std::size_t i = 0; i < reps; ++i) {
    const Outcome& o = outcomes[i];
    if (!o.error.empty()) {
      report.failures.push_back({i, o.error});
      continue;
    }
    if (o.degenerate) {
      report.degenerate.push_back(i);
      continue;
    }
    for (std::size_t m = 0; m < per_method.size(); ++m) per_method[m].push_back(o.p[m]);
    if (o.upper) conditional.push_back(o.conditional_p);
  }
  for (std::size_t m = 0; m < per_method.size(); ++m) {
    if (!per_method[m].empty()) {
      report.methods.push_back(summarize(config.methods[m], std::move(per_method[m])));
    }
  }
  const bool two_group = std::holds_alternative<ExpRatesNull>(config.model) ||
                         std::holds_alternative<NormVarNull>(config.model);
  if (two_group) {
    ConditionalSummary c;
    c.count = static_cast<int>(conditional.size());
    if (!conditional.empty()) {
      std::ranges::sort(conditional);
      c.ks = ks_statistic(conditional);
    }
    report.conditional_upper = c;
  }
  return report;
}

}  // namespace dirf::sim
