#include "dirf/cli.hpp"
#include "dirf/errors.hpp"
#include "dirf/models/exp_rates.hpp"
#include "dirf/models/linreg.hpp"
#include "dirf/models/mvn_mean.hpp"
#include "dirf/models/norm_var.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace dirf::cli {

namespace {

const std::vector<std::string> kModels = {"exp-rates", "norm-var", "linreg", "mvn-mean"};

struct Parsed {
  RunSpec spec;
  std::string method = "both";
  std::string format = "json";
  bool json_flag = false;
  bool text_flag = false;
  std::string methods_list;
};

class Parser {
 public:
  Parser() : app_("Directional tests for exponential-family hypotheses", "dirf") {
    app_.require_subcommand(1);
    test_ = app_.add_subcommand("test", "Directional p-value for one dataset");
    simulate_ = app_.add_subcommand("simulate", "Null calibration by Monte Carlo");
    validate_ = app_.add_subcommand("validate", "Quadrature against closed form on random instances");
    auto& s = p_.spec;

    for (auto* sub : {test_, simulate_, validate_}) {
      sub->add_option("--model", s.model, "Model id")->required();
      sub->add_option("--format", p_.format, "json or text")->check(CLI::IsMember({"json", "text"}));
      sub->add_flag("--json", p_.json_flag, "Shorthand for --format json");
      sub->add_flag("--text", p_.text_flag, "Shorthand for --format text");
    }
    test_->add_option("--data", s.data_path, "CSV data file")->required()->check(CLI::ExistingFile);
    test_->add_option("--psi", s.psi, "Hypothesized value (comma-separated vector for mvn-mean)");
    test_->add_option("--hypothesis", s.hypothesis_path, "JSON hypothesis file for linreg")
        ->check(CLI::ExistingFile);
    test_->add_flag("--intercept", s.intercept, "Prepend an intercept column (linreg)");
    test_->add_option("--method", p_.method, "quadrature, closed-form or both")
        ->check(CLI::IsMember({"quadrature", "closed-form", "both"}));

    simulate_->add_option("--reps", s.replicates, "Replicate count")->check(CLI::PositiveNumber);
    simulate_->add_option("--seed", s.seed, "64-bit seed");
    simulate_->add_option("--psi", s.psi, "Hypothesized value, also the generating value");
    simulate_->add_option("--n1", s.n1, "Group 1 size")->check(CLI::PositiveNumber);
    simulate_->add_option("--n2", s.n2, "Group 2 size")->check(CLI::PositiveNumber);
    simulate_->add_option("--n", s.n, "Sample size (linreg, mvn-mean)")->check(CLI::PositiveNumber);
    simulate_->add_option("--methods", p_.methods_list, "Comma-separated simulation methods");

    validate_->add_option("--cases", s.cases, "Random instances per model")->check(CLI::PositiveNumber);
    validate_->add_option("--tol", s.tolerance, "Relative tolerance")->check(CLI::PositiveNumber);
    validate_->add_option("--seed", s.seed, "64-bit seed");
  }

  CLI::App& app() { return app_; }

  RunSpec finish() {
    RunSpec s = p_.spec;
    if (app_.got_subcommand(test_)) s.subcommand = Subcommand::test;
    else if (app_.got_subcommand(simulate_)) s.subcommand = Subcommand::simulate;
    else s.subcommand = Subcommand::validate;

    const bool all_ok = s.subcommand == Subcommand::validate && s.model == "all";
    if (!all_ok && std::ranges::find(kModels, s.model) == kModels.end()) {
      throw ParseError("--model must be one of exp-rates, norm-var, linreg, mvn-mean" +
                       std::string(s.subcommand == Subcommand::validate ? ", all" : ""));
    }
    s.method = method_from_string(p_.method);
    if (p_.json_flag && p_.text_flag) throw ParseError("--json and --text are exclusive");
    s.format = p_.format == "text" ? OutputFormat::text : OutputFormat::json;
    if (p_.json_flag) s.format = OutputFormat::json;
    if (p_.text_flag) s.format = OutputFormat::text;
    if (!p_.methods_list.empty()) {
      std::stringstream ss(p_.methods_list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        sim::sim_method_from_string(item);
        s.sim_methods.push_back(item);
      }
    }
    if (s.subcommand == Subcommand::test) {
      if (s.model == "linreg") {
        if (!s.hypothesis_path) throw ParseError("linreg needs --hypothesis <file.json>");
      } else if (!s.psi) {
        throw ParseError(s.model + " needs --psi");
      }
    }
    return s;
  }

 private:
  CLI::App app_;
  CLI::App* test_;
  CLI::App* simulate_;
  CLI::App* validate_;
  Parsed p_;
};

double scalar_psi(const RunSpec& spec) {
  const auto v = parse_vector(*spec.psi);
  if (v.size() != 1) throw ParseError("--psi must be a single number for " + spec.model);
  return v[0];
}

template <ExpFamModel M>
TestReport make_report(const typename M::Data& data, const typename M::Hypothesis& hyp,
                       Method method) {
  TestReport report;
  report.model = std::string(M::name);
  report.result = directional_test<M>(data, hyp, method);
  report.comparison = M::comparison_statistics(data, hyp);
  return report;
}

TestReport run_test(const RunSpec& spec) {
  const CsvTable table = parse_csv(read_file(spec.data_path));
  if (spec.model == "exp-rates") {
    const auto s = parse_grouped(table);
    const auto data = ExpRatesData::from_samples(s.group1, s.group2);
    const double psi = scalar_psi(spec);
    auto report = make_report<ExpRates>(data, psi, spec.method);
    const auto f = ExpRates::fit(data, psi);
    report.fit = {{"psi", psi},
                  {"u1", data.u1},
                  {"u2", data.u2},
                  {"n1", data.n1},
                  {"n2", data.n2},
                  {"theta_hat1", f.theta_hat[0]},
                  {"theta_hat2", f.theta_hat[1]},
                  {"theta_hat_psi1", f.theta_hat_psi[0]},
                  {"theta_hat_psi2", f.theta_hat_psi[1]},
                  {"F", f.W},
                  {"F_df1", 2.0 * data.n1},
                  {"F_df2", 2.0 * data.n2},
                  {"F_threshold", 1.0}};
    return report;
  }
  if (spec.model == "norm-var") {
    const auto s = parse_grouped(table);
    const auto data = NormVarData::from_samples(s.group1, s.group2);
    const double psi = scalar_psi(spec);
    auto report = make_report<NormVar>(data, psi, spec.method);
    const auto f = NormVar::fit(data, psi);
    report.fit = {{"psi", psi},
                  {"n1", data.n1},
                  {"n2", data.n2},
                  {"v1sq", data.v1sq},
                  {"v2sq", data.v2sq},
                  {"sigma2_psi1", f.sigma2_psi[0]},
                  {"sigma2_psi2", f.sigma2_psi[1]},
                  {"F", f.W},
                  {"F_df1", data.n2 - 1.0},
                  {"F_df2", data.n1 - 1.0},
                  {"F_threshold", f.threshold}};
    return report;
  }
  if (spec.model == "linreg") {
    const auto data = parse_regression(table, spec.intercept);
    const auto hyp = parse_linear_hypothesis(read_file(*spec.hypothesis_path));
    auto report = make_report<LinReg>(data, hyp, spec.method);
    const auto f = LinReg::fit(data, hyp);
    report.fit = {{"n", f.n},
                  {"p", f.p},
                  {"d", f.d},
                  {"a", f.a},
                  {"b", f.b},
                  {"sse", f.sse},
                  {"sigma2_hat", f.sigma2_hat},
                  {"sigma2_hat_psi", f.sigma2_hat_psi},
                  {"F", f.F_stat},
                  {"F_df1", f.d},
                  {"F_df2", f.n - f.p}};
    return report;
  }
  const auto data = parse_matrix(table);
  const auto psi = parse_vector(*spec.psi);
  auto report = make_report<MvnMean>(data, psi, spec.method);
  const auto f = MvnMean::fit(data, psi);
  report.fit = {{"n", f.n},
                {"p", f.p},
                {"C", f.C},
                {"T2", f.T2},
                {"F", (f.n - f.p) / static_cast<double>(f.p) * f.quad_B},
                {"F_df1", f.p},
                {"F_df2", f.n - f.p}};
  return report;
}

sim::SimConfig simulation_config(const RunSpec& spec) {
  sim::SimConfig config;
  config.replicates = spec.replicates;
  config.seed = spec.seed;
  const bool two_group = spec.model == "exp-rates" || spec.model == "norm-var";
  if (spec.model == "exp-rates") {
    sim::ExpRatesNull m;
    m.n1 = spec.n1.value_or(5);
    m.n2 = spec.n2.value_or(5);
    if (spec.psi) m.psi = scalar_psi(spec);
    config.model = m;
  } else if (spec.model == "norm-var") {
    sim::NormVarNull m;
    m.n1 = spec.n1.value_or(5);
    m.n2 = spec.n2.value_or(7);
    if (spec.psi) m.psi = scalar_psi(spec);
    config.model = m;
  } else if (spec.model == "linreg") {
    // Intercept and two covariates drawn once from the seed; H: beta_3 = 0.
    sim::LinRegNull m;
    const int n = spec.n.value_or(20);
    sim::CounterRng rng(spec.seed, 0, 0xD5u);
    m.X = Matrix(static_cast<std::size_t>(n), 3);
    for (std::size_t i = 0; i < m.X.rows(); ++i) {
      m.X(i, 0) = 1.0;
      m.X(i, 1) = rng.normal();
      m.X(i, 2) = rng.normal();
    }
    m.beta = {1.0, 0.5, 0.0};
    m.A = Matrix(1, 3, {0.0, 0.0, 1.0});
    m.psi = {0.0};
    if (spec.psi) {
      m.psi = {scalar_psi(spec)};
      m.beta[2] = m.psi[0];
    }
    config.model = m;
  } else {
    sim::MvnNull m;
    m.n = spec.n.value_or(10);
    m.mu = spec.psi ? parse_vector(*spec.psi) : std::vector<double>{0.0, 0.0};
    m.precision = Matrix::identity(m.mu.size());
    config.model = m;
  }
  if (spec.sim_methods.empty()) {
    config.methods = {sim::SimMethod::directional_quadrature, sim::SimMethod::directional_closed,
                      sim::SimMethod::wald, sim::SimMethod::lrt};
    if (two_group) config.methods.push_back(sim::SimMethod::one_tailed_f);
  } else {
    for (const auto& name : spec.sim_methods) config.methods.push_back(sim::sim_method_from_string(name));
  }
  return config;
}

int run_validate(const RunSpec& spec, std::ostream& out) {
  std::vector<sim::OracleModel> models;
  if (spec.model == "all") {
    models = {sim::OracleModel::exp_rates, sim::OracleModel::norm_var, sim::OracleModel::linreg,
              sim::OracleModel::mvn_mean};
  } else {
    models = {sim::oracle_model_from_string(spec.model)};
  }
  sim::OracleOptions options;
  options.cases = spec.cases;
  options.seed = spec.seed;
  options.tol_singular = spec.tolerance;
  options.tol_regular = spec.tolerance;

  bool passed = true;
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["command"] = "validate";
  doc["seed"] = spec.seed;
  doc["cases"] = spec.cases;
  doc["tolerance"] = spec.tolerance;
  std::ostringstream text;
  for (auto model : models) {
    const auto cases = sim::oracle_check(model, options);
    double worst = 0.0;
    nlohmann::json failed = nlohmann::json::array();
    for (const auto& c : cases) {
      if (c.error.empty()) worst = std::max(worst, c.rel_diff);
      if (!c.passed) {
        failed.push_back({{"index", c.index},
                          {"p_quadrature", c.p_quadrature},
                          {"p_closed", c.p_closed},
                          {"rel_diff", std::isfinite(c.rel_diff) ? nlohmann::json(c.rel_diff) : nlohmann::json(nullptr)},
                          {"error", c.error}});
      }
    }
    passed = passed && failed.empty();
    doc["models"][sim::to_string(model)] = {
        {"cases", cases.size()}, {"failures", failed.size()}, {"max_rel_diff", worst}, {"failed", failed}};
    text << std::left << std::setw(10) << sim::to_string(model) << " " << cases.size() << " cases, "
         << failed.size() << " failures, max relative difference " << worst << "\n";
  }
  doc["passed"] = passed;
  if (spec.format == OutputFormat::json) {
    out << doc.dump(2) << "\n";
  } else {
    out << text.str() << (passed ? "all cases within tolerance\n" : "FAILED\n");
  }
  return passed ? 0 : 1;
}

}  // namespace

RunSpec parse_args(int argc, const char* const* argv) {
  Parser parser;
  try {
    parser.app().parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw ParseError(e.what());
  }
  return parser.finish();
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    switch (spec.subcommand) {
      case Subcommand::test: {
        const auto report = run_test(spec);
        out << (spec.format == OutputFormat::json ? to_json(report) : to_text(report));
        if (report.result.diagnostics.degenerate) {
          err << "warning: hypothesis coincides with the fit; p = 1\n";
          return 2;
        }
        return 0;
      }
      case Subcommand::simulate: {
        const auto report = sim::run_calibration(simulation_config(spec));
        out << (spec.format == OutputFormat::json ? to_json(report) : to_text(report));
        return 0;
      }
      case Subcommand::validate:
        return run_validate(spec, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Parser parser;
  try {
    parser.app().parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = parser.app().exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  try {
    return run(parser.finish(), out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dirf::cli
