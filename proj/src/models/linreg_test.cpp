#include "dirf/errors.hpp"
#include "dirf/models/linreg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dirf;

namespace {

RegressionData worked_data() {
  return RegressionData({0, 1, 1, 2}, Matrix(4, 2, {1, 0, 1, 1, 1, 2, 1, 3}));
}

LinearConstraint slope_zero() { return LinearConstraint(Matrix(1, 2, {0, 1}), {0.0}); }

struct Instance {
  RegressionData data;
  LinearConstraint hyp;
};

Instance random_instance(std::mt19937_64& gen, int max_p = 8, int max_n = 60) {
  std::normal_distribution<double> z;
  const int p = std::uniform_int_distribution<int>(1, max_p)(gen);
  const int n = std::uniform_int_distribution<int>(p + 2, max_n)(gen);
  const int d = std::uniform_int_distribution<int>(1, p)(gen);
  Matrix X(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    for (std::size_t j = 1; j < X.cols(); ++j) X(i, j) = z(gen);
  }
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& v : y) v = z(gen);
  Matrix A(static_cast<std::size_t>(d), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = z(gen);
  }
  std::vector<double> psi(static_cast<std::size_t>(d));
  for (double& v : psi) v = 0.3 * z(gen);
  return {RegressionData(std::move(y), std::move(X)), LinearConstraint(std::move(A), std::move(psi))};
}

}  // namespace

TEST(LinRegFit, WorkedInstance) {
  const auto f = LinReg::fit(worked_data(), slope_zero());
  EXPECT_NEAR(f.beta_hat[0], 0.1, 1e-14);
  EXPECT_NEAR(f.beta_hat[1], 0.6, 1e-14);
  EXPECT_NEAR(f.sse, 0.2, 1e-14);
  EXPECT_NEAR(f.a, 0.5, 1e-14);
  EXPECT_NEAR(f.b, 0.45, 1e-14);
  EXPECT_NEAR(f.F_stat, 18.0, 1e-12);
  EXPECT_NEAR(f.beta_hat_psi[0], 1.0, 1e-14);
  EXPECT_NEAR(f.beta_hat_psi[1], 0.0, 1e-14);
}

TEST(LinRegFit, Degenerate) {
  EXPECT_TRUE(LinReg::fit(worked_data(), LinearConstraint(Matrix(1, 2, {0, 1}), {0.6})).degenerate);
  // y orthogonal to both columns and A = I, psi = 0.
  const RegressionData orth({1, -1, -1, 1}, Matrix(4, 2, {1, 0, 1, 1, 1, 2, 1, 3}));
  const auto f = LinReg::fit(orth, LinearConstraint(Matrix::identity(2), {0, 0}));
  EXPECT_NEAR(f.beta_hat[0], 0.0, 1e-14);
  EXPECT_NEAR(f.beta_hat[1], 0.0, 1e-14);
  EXPECT_TRUE(f.degenerate);
}

TEST(LinRegFit, Errors) {
  EXPECT_THROW(RegressionData({1, 2, 3}, Matrix(3, 2, {1, 0, 1, 1, 1, 2})), PreconditionError);
  const RegressionData collinear({0, 1, 3, 2}, Matrix(4, 2, {1, 2, 1, 2, 1, 2, 1, 2}));
  EXPECT_THROW(LinReg::fit(collinear, LinearConstraint(Matrix(1, 2, {0, 1}), {0})), PreconditionError);
  const RegressionData perfect({1, 3, 5, 7}, Matrix(4, 2, {1, 0, 1, 1, 1, 2, 1, 3}));
  EXPECT_THROW(LinReg::fit(perfect, slope_zero()), PreconditionError);
  EXPECT_THROW(LinReg::fit(worked_data(), LinearConstraint(Matrix(2, 2, {0, 1, 0, 2}), {0, 0})),
               PreconditionError);
  EXPECT_THROW(LinReg::fit(worked_data(), LinearConstraint(Matrix(1, 3, {0, 1, 0}), {0})),
               PreconditionError);
  EXPECT_THROW(LinearConstraint(Matrix(1, 2, {0, 1}), {0, 1}), PreconditionError);
}

TEST(LinRegDensity, WorkedInstance) {
  const auto density = LinReg::line_density(LinReg::fit(worked_data(), slope_zero()));
  const auto& q = std::get<QuadraticPower>(density.form());
  EXPECT_NEAR(q.a, 0.5, 1e-14);
  EXPECT_NEAR(q.b, 0.45, 1e-14);
  EXPECT_EQ(q.exponent, 0.0);
  EXPECT_EQ(density.d(), 1);
  EXPECT_NEAR(density.t_max(), std::sqrt(10.0 / 9), 1e-14);
}

TEST(LinRegClosedForm, WorkedInstance) {
  const auto f = LinReg::fit(worked_data(), slope_zero());
  // Textbook oracle: F(1, 2) tail = 1 - sqrt(F / (2 + F)).
  const double oracle = 1.0 - std::sqrt(18.0 / 20.0);
  EXPECT_NEAR(LinReg::closed_form_pvalue(f), oracle, 1e-13);
  EXPECT_NEAR(oracle, 0.051317, 1e-6);
}

TEST(LinRegIdentities, RandomInstances) {
  std::mt19937_64 gen(73);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = random_instance(gen);
    const auto f = LinReg::fit(inst.data, inst.hyp);
    const double n = f.n;
    EXPECT_NEAR(n * (f.a - f.b), f.sse, 1e-9 * f.sse);
    EXPECT_NEAR(n * f.b, f.constraint_quad, 1e-9 * std::max(f.constraint_quad, 1e-12 * f.sse));
    EXPECT_LE(f.b, f.a);
    EXPECT_NEAR(f.sigma2_hat, f.sse / n, 1e-15 * f.sse);
    const auto ab = inst.hyp.A * std::span<const double>(f.beta_hat_psi);
    for (std::size_t k = 0; k < ab.size(); ++k) {
      EXPECT_NEAR(ab[k], inst.hyp.psi[k], 1e-9 * std::max(1.0, std::fabs(inst.hyp.psi[k])));
    }
    // (X beta_hat - y)^T X beta_psi = 0
    const auto fitted = inst.data.X * std::span<const double>(f.beta_hat);
    const auto fitted_psi = inst.data.X * std::span<const double>(f.beta_hat_psi);
    double cross = 0.0;
    for (std::size_t k = 0; k < fitted.size(); ++k) cross += (fitted[k] - inst.data.y[k]) * fitted_psi[k];
    EXPECT_NEAR(cross, 0.0, 1e-9 * std::sqrt(f.sse * dot(fitted_psi, fitted_psi)));
  }
}

TEST(LinRegIdentities, VarianceAlongLine) {
  // sigma^2(t) = a - b t^2: t = 0 gives the constrained fit, t = 1 the MLE.
  const auto f = LinReg::fit(worked_data(), slope_zero());
  EXPECT_NEAR(f.a - f.b, f.sigma2_hat, 1e-15);
  EXPECT_NEAR(f.a, f.sigma2_hat_psi, 0.0);
}

TEST(LinRegProperties, QuadratureMatchesClosedForm) {
  std::mt19937_64 gen(79);
  for (int i = 0; i < 300; ++i) {
    const auto inst = random_instance(gen);
    const auto r = directional_test<LinReg>(inst.data, inst.hyp, Method::both);
    if (r.diagnostics.degenerate) continue;
    EXPECT_NEAR(r.p, *r.diagnostics.closed_form_p, 1e-8 * *r.diagnostics.closed_form_p) << i;
  }
}

TEST(LinRegProperties, ReparameterizationInvariance) {
  std::mt19937_64 gen(83);
  std::normal_distribution<double> z;
  for (int i = 0; i < 50; ++i) {
    const auto inst = random_instance(gen, 5, 30);
    const std::size_t p = inst.data.p();
    Matrix M(p, p);
    for (std::size_t r = 0; r < p; ++r) {
      for (std::size_t c = 0; c < p; ++c) M(r, c) = (r == c ? 2.0 : 0.0) + 0.3 * z(gen);
    }
    // X -> X M and A -> A M describe the same hypothesis for gamma = M^{-1} beta.
    const RegressionData moved(inst.data.y, inst.data.X * M);
    const LinearConstraint hyp(inst.hyp.A * M, inst.hyp.psi);
    const auto f0 = LinReg::fit(inst.data, inst.hyp);
    const auto f1 = LinReg::fit(moved, hyp);
    EXPECT_NEAR(f1.F_stat, f0.F_stat, 1e-9 * std::max(1.0, f0.F_stat));
    EXPECT_NEAR(LinReg::closed_form_pvalue(f1), LinReg::closed_form_pvalue(f0), 1e-9);
  }
}

TEST(LinRegProperties, ConstantFactorOnDensityIsIrrelevant) {
  const auto f = LinReg::fit(worked_data(), slope_zero());
  const auto base = directional_pvalue(LinReg::line_density(f));
  for (double c : {0.01, 3.0, 1e3}) {
    const auto scaled = directional_pvalue(LineDensity::quadratic(1, c * f.a, c * f.b, 0.0));
    EXPECT_NEAR(scaled.p, base.p, 1e-12);
  }
}

TEST(LinRegComparison, WorkedInstance) {
  const auto c = LinReg::comparison_statistics(worked_data(), slope_zero());
  EXPECT_EQ(c.df, 1);
  EXPECT_NEAR(c.wald, 0.45 * 4 / 0.05, 1e-10);
  EXPECT_NEAR(c.lrt, 4.0 * std::log(0.5 / 0.05), 1e-12);
}

TEST(LinRegFit, ConditioningWarning) {
  const RegressionData ill({0.1, 1.3, 1.9, 3.2, 3.8},
                           Matrix(5, 2, {1, 0, 1, 3e-7, 1, 6e-7, 1, 9e-7, 1, 1.2e-6}));
  const auto f = LinReg::fit(ill, LinearConstraint(Matrix(1, 2, {0, 1}), {0.0}));
  EXPECT_FALSE(f.warnings.empty());
}
