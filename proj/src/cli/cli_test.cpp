#include "dirf/cli.hpp"
#include "dirf/errors.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dirf;
using namespace dirf::cli;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("dirf_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dirf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string error_message(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Csv, Examples) {
  const auto t = parse_csv("a,\"b\"\r\n1,2\n\n3, 4.5\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1], (std::vector<double>{3.0, 4.5}));
  EXPECT_EQ(t.lines, (std::vector<int>{2, 4}));
}

TEST(Csv, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_message("a,b\n1,2\n3\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_message("a,b\n1,x\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_message("").find("header"), std::string::npos);
  EXPECT_FALSE(error_message("a,b\n").empty());
}

TEST(Csv, Grouped) {
  const auto g = parse_grouped(parse_csv("group,value\n1,0.5\n2,1.5\n1,2\n"));
  EXPECT_EQ(g.group1, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(g.group2, (std::vector<double>{1.5}));
  EXPECT_THROW(parse_grouped(parse_csv("group,value\n1,0.5\n3,1.5\n")), ParseError);
  EXPECT_THROW(parse_grouped(parse_csv("g,v\n1,0.5\n2,1.5\n")), ParseError);
}

TEST(Csv, RegressionWithIntercept) {
  const auto d = parse_regression(parse_csv("y,x\n0,0\n1,1\n1,2\n2,3\n"), true);
  EXPECT_EQ(d.p(), 2u);
  EXPECT_EQ(d.X(2, 0), 1.0);
  EXPECT_EQ(d.X(2, 1), 2.0);
  EXPECT_EQ(d.y[3], 2.0);
  EXPECT_THROW(parse_regression(parse_csv("x,y\n0,0\n1,1\n1,2\n2,3\n"), true), ParseError);
}

TEST(Hypothesis, Json) {
  const auto h = parse_linear_hypothesis(R"({"A": [[0, 1]], "psi": [0.5]})");
  EXPECT_EQ(h.A(0, 1), 1.0);
  EXPECT_EQ(h.psi, (std::vector<double>{0.5}));
  EXPECT_THROW(parse_linear_hypothesis(R"({"A": [[0, 1], [1]], "psi": [0, 0]})"), ParseError);
  EXPECT_THROW(parse_linear_hypothesis("not json"), ParseError);
  EXPECT_EQ(parse_vector("1, -2.5"), (std::vector<double>{1.0, -2.5}));
  EXPECT_THROW(parse_vector("1,,2"), ParseError);
}

TEST(Report, JsonRoundTrip) {
  const auto path = temp_file("rt.csv", "group,value\n1,1\n1,2\n2,3\n2,4\n2,0.5\n");
  const auto res = invoke({"test", "--model", "exp-rates", "--data", path, "--psi", "1.5"});
  ASSERT_EQ(res.code, 0) << res.err;
  const auto report = test_report_from_json(res.out);
  EXPECT_EQ(report.model, "exp-rates");
  EXPECT_EQ(to_json(report), res.out);
}

TEST(Run, WorkedInstances) {
  const auto exp_path = temp_file("exp.csv", "group,value\n1,1\n1,2\n2,3\n2,4\n");
  const auto a = invoke({"test", "--model", "exp-rates", "--data", exp_path, "--psi", "1"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NEAR(nlohmann::json::parse(a.out).at("p").get<double>(), 0.432, 1e-9);
  const auto lr_path = temp_file("lr.csv", "y,x\n0,0\n1,1\n1,2\n2,3\n");
  const auto hyp_path = temp_file("hyp.json", R"({"A": [[0, 1]], "psi": [0]})");
  const auto b = invoke({"test", "--model", "linreg", "--data", lr_path, "--intercept", "--hypothesis",
                         hyp_path, "--text"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("F statistic     18 on (1, 2) df"), std::string::npos) << b.out;
}

TEST(Run, ExitCodes) {
  const auto path = temp_file("deg.csv", "group,value\n1,1\n1,2\n2,3\n2,4\n");
  // psi at the MLE: ybar2 / ybar1 = 3.5 / 1.5.
  const auto deg = invoke({"test", "--model", "exp-rates", "--data", path, "--psi", "2.3333333333333335"});
  EXPECT_EQ(deg.code, 2);
  EXPECT_TRUE(nlohmann::json::parse(deg.out).at("degenerate").get<bool>());
  EXPECT_EQ(invoke({"test", "--model", "exp-rates", "--data", path, "--psi", "-1"}).code, 1);
  EXPECT_EQ(invoke({"test", "--model", "nope", "--data", path, "--psi", "1"}).code, 1);
  EXPECT_EQ(invoke({"test", "--model", "exp-rates", "--data", "/nonexistent.csv", "--psi", "1"}).code, 1);
  EXPECT_EQ(invoke({"test", "--model", "linreg", "--data", path}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  const auto empty = temp_file("empty.csv", "");
  const auto e = invoke({"test", "--model", "exp-rates", "--data", empty, "--psi", "1"});
  EXPECT_EQ(e.code, 1);
  EXPECT_FALSE(e.err.empty());
}

TEST(Run, SimulateIsReproducible) {
  const std::vector<std::string> args = {"simulate", "--model", "norm-var", "--reps", "200", "--seed", "4"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j.at("methods").at("directional_closed").contains("ks"));
  EXPECT_EQ(j.at("replicates").get<int>(), 200);
}

TEST(Run, Validate) {
  const auto res = invoke({"validate", "--model", "all", "--cases", "20"});
  EXPECT_EQ(res.code, 0) << res.out << res.err;
  EXPECT_TRUE(nlohmann::json::parse(res.out).at("passed").get<bool>());
}
