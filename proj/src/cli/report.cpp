#include "dirf/cli.hpp"
#include "dirf/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace dirf::cli {

using nlohmann::json;

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string alpha_key(double alpha) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << alpha;
  return s.str();
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

}  // namespace

std::string to_json(const TestReport& report) {
  const auto& r = report.result;
  json j;
  j["schema_version"] = 1;
  j["command"] = "test";
  j["model"] = report.model;
  j["p"] = number(r.p);
  j["method"] = to_string(r.method);
  j["numerator"] = number(r.numerator);
  j["denominator"] = number(r.denominator);
  j["t_max"] = number(r.t_max);
  j["est_abs_error"] = number(r.est_abs_error);
  j["degenerate"] = r.diagnostics.degenerate;
  j["at_boundary"] = r.diagnostics.at_boundary;
  if (r.diagnostics.closed_form_p) j["closed_form_p"] = number(*r.diagnostics.closed_form_p);
  if (r.diagnostics.discrepancy) j["discrepancy"] = number(*r.diagnostics.discrepancy);
  j["warnings"] = r.diagnostics.warnings;
  const auto& c = report.comparison;
  j["comparison"] = {{"wald", number(c.wald)},
                     {"lrt", number(c.lrt)},
                     {"df", c.df},
                     {"wald_p", number(c.df > 0 ? chi2_sf(c.wald, c.df) : 1.0)},
                     {"lrt_p", number(c.df > 0 ? chi2_sf(c.lrt, c.df) : 1.0)}};
  json fit = json::object();
  for (const auto& [k, v] : report.fit) fit[k] = number(v);
  j["fit"] = fit;
  return j.dump(2) + "\n";
}

TestReport test_report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != 1) throw ParseError("unsupported schema_version");
    TestReport report;
    report.model = j.at("model").get<std::string>();
    auto& r = report.result;
    r.p = j.at("p").get<double>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.numerator = j.at("numerator").get<double>();
    r.denominator = j.at("denominator").get<double>();
    r.t_max = number_or_inf(j.at("t_max"));
    r.est_abs_error = j.at("est_abs_error").get<double>();
    r.diagnostics.degenerate = j.at("degenerate").get<bool>();
    r.diagnostics.at_boundary = j.at("at_boundary").get<bool>();
    if (j.contains("closed_form_p")) r.diagnostics.closed_form_p = j.at("closed_form_p").get<double>();
    if (j.contains("discrepancy")) r.diagnostics.discrepancy = j.at("discrepancy").get<double>();
    r.diagnostics.warnings = j.at("warnings").get<std::vector<std::string>>();
    const auto& c = j.at("comparison");
    report.comparison.wald = c.at("wald").get<double>();
    report.comparison.lrt = c.at("lrt").get<double>();
    report.comparison.df = c.at("df").get<int>();
    for (const auto& [k, v] : j.at("fit").items()) report.fit[k] = number_or_inf(v);
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("test report: ") + e.what());
  }
}

std::string to_text(const TestReport& report) {
  const auto& r = report.result;
  std::ostringstream s;
  s << "model           " << report.model << "\n";
  s << "method          " << to_string(r.method) << "\n";
  s << "directional p   " << fmt(r.p) << "\n";
  if (r.diagnostics.closed_form_p) s << "closed-form p   " << fmt(*r.diagnostics.closed_form_p) << "\n";
  if (r.diagnostics.discrepancy) s << "discrepancy     " << fmt(*r.diagnostics.discrepancy) << "\n";
  s << "t_max           " << (std::isfinite(r.t_max) ? fmt(r.t_max) : "inf") << "\n";
  const auto f = report.fit.find("F");
  const auto d1 = report.fit.find("F_df1");
  const auto d2 = report.fit.find("F_df2");
  if (f != report.fit.end() && d1 != report.fit.end() && d2 != report.fit.end()) {
    s << "F statistic     " << fmt(f->second) << " on (" << d1->second << ", " << d2->second
      << ") df\n";
  }
  const auto& c = report.comparison;
  if (c.df > 0) {
    s << "Wald            " << fmt(c.wald) << " (p = " << fmt(chi2_sf(c.wald, c.df)) << ", df "
      << c.df << ")\n";
    s << "LRT             " << fmt(c.lrt) << " (p = " << fmt(chi2_sf(c.lrt, c.df)) << ", df "
      << c.df << ")\n";
  }
  for (const auto& w : r.diagnostics.warnings) s << "warning: " << w << "\n";
  return s.str();
}

std::string to_json(const sim::CalibrationReport& report) {
  json j;
  j["schema_version"] = 1;
  j["command"] = "simulate";
  j["model"] = report.model;
  j["replicates"] = report.replicates;
  j["seed"] = report.seed;
  json methods = json::object();
  for (const auto& m : report.methods) {
    json rates = json::object();
    for (std::size_t k = 0; k < sim::kAlphas.size(); ++k) {
      rates[alpha_key(sim::kAlphas[k])] = m.rejection_rates[k];
    }
    methods[sim::to_string(m.method)] = {{"ks", m.ks},
                                         {"rejection_rates", rates},
                                         {"max_p", m.max_p},
                                         {"count", m.sorted_pvalues.size()},
                                         {"pvalues", m.sorted_pvalues}};
  }
  j["methods"] = methods;
  if (report.conditional_upper) {
    j["conditional_upper"] = {{"count", report.conditional_upper->count},
                              {"ks", report.conditional_upper->ks}};
  }
  j["degenerate"] = report.degenerate;
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"replicate", f.replicate}, {"message", f.message}});
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

std::string to_text(const sim::CalibrationReport& report) {
  std::ostringstream s;
  s << "model " << report.model << ", " << report.replicates << " replicates, seed " << report.seed
    << "\n";
  s << "critical KS value at 1%: " << fmt(1.63 / std::sqrt(static_cast<double>(report.replicates)))
    << "\n";
  for (const auto& m : report.methods) {
    s << std::left << std::setw(24) << sim::to_string(m.method) << " KS " << fmt(m.ks);
    for (std::size_t k = 0; k < sim::kAlphas.size(); ++k) {
      s << "  rej@" << alpha_key(sim::kAlphas[k]) << " " << fmt(m.rejection_rates[k]);
    }
    s << "  max p " << fmt(m.max_p) << "\n";
  }
  if (report.conditional_upper) {
    s << "upper branch: " << report.conditional_upper->count << " replicates, KS "
      << fmt(report.conditional_upper->ks) << "\n";
  }
  if (!report.degenerate.empty()) s << report.degenerate.size() << " degenerate replicates\n";
  for (const auto& f : report.failures) s << "replicate " << f.replicate << " failed: " << f.message << "\n";
  return s.str();
}

}  // namespace dirf::cli
