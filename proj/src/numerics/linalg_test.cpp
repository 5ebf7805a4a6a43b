#include "dirf/errors.hpp"
#include "dirf/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dirf;

namespace {

Matrix random_spd(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> z;
  Matrix g(n + 2, n);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = z(gen);
  }
  Matrix m = gram(g);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.1;
  return m;
}

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  for (double& x : v) x = z(gen);
  return v;
}

}  // namespace

TEST(SpdSolve, Examples) {
  const SpdMatrix id(Matrix::identity(2));
  const std::vector<double> r1 = {1.0, 2.0};
  EXPECT_EQ(spd_solve(id, r1), r1);

  const SpdMatrix diag(Matrix(2, 2, {2.0, 0.0, 0.0, 4.0}));
  const std::vector<double> r2 = {2.0, 4.0};
  const auto z2 = spd_solve(diag, r2);
  EXPECT_NEAR(z2[0], 1.0, 1e-15);
  EXPECT_NEAR(z2[1], 1.0, 1e-15);

  const SpdMatrix b(Matrix(2, 2, {2.0 / 9, -1.0 / 9, -1.0 / 9, 2.0 / 9}));
  const std::vector<double> r3 = {1.0 / 3, 1.0 / 3};
  const auto z3 = spd_solve(b, r3);
  EXPECT_NEAR(z3[0], 3.0, 1e-13);
  EXPECT_NEAR(z3[1], 3.0, 1e-13);
  EXPECT_NEAR(b.determinant(), 1.0 / 27, 1e-15);
  const Matrix inv = b.inverse();
  EXPECT_NEAR(inv(0, 0), 6.0, 1e-12);
  EXPECT_NEAR(inv(0, 1), 3.0, 1e-12);
}

TEST(SpdSolve, RandomResiduals) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SpdMatrix m(random_spd(gen, n));
    const auto rhs = random_vector(gen, n);
    const auto z = spd_solve(m, rhs);
    const auto back = m.matrix() * std::span<const double>(z);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (back[i] - rhs[i]) * (back[i] - rhs[i]);
    EXPECT_LE(std::sqrt(res), 1e-10 * norm2(rhs));
  }
}

TEST(SpdMatrix, DeterminantMatchesElimination) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = random_spd(gen, 1 + trial % 6);
    const SpdMatrix s(m);
    EXPECT_NEAR(s.determinant() / determinant(m), 1.0, 1e-11);
    EXPECT_NEAR(s.log_determinant(), std::log(determinant(m)), 1e-10);
  }
}

TEST(SpdMatrix, SingularIsReportedNotRegularized) {
  EXPECT_THROW(SpdMatrix(Matrix(2, 2, {1.0, 1.0, 1.0, 1.0})), SingularMatrixError);
  EXPECT_THROW(SpdMatrix(Matrix(2, 2, {1.0, 0.0, 0.0, -1.0})), SingularMatrixError);
  EXPECT_THROW(SpdMatrix(Matrix(2, 2, {0.0, 0.0, 0.0, 0.0})), SingularMatrixError);
}

TEST(SpdMatrix, RejectsAsymmetricOrNonSquare) {
  EXPECT_THROW(SpdMatrix(Matrix(2, 2, {2.0, 1.0, 0.0, 2.0})), PreconditionError);
  EXPECT_THROW(SpdMatrix(Matrix(2, 3)), PreconditionError);
}

TEST(RankOneDeterminant, Examples) {
  EXPECT_EQ(rank1_det_update(1.0, 0.0, 5.0), 1.0);
  EXPECT_NEAR(rank1_det_update(1.0 / 9, 2.0 / 3, 1.0), 1.0 / 27, 1e-16);
  const double quad = 0.37;
  EXPECT_NEAR(rank1_det_update(2.5, quad, 1.0 / std::sqrt(quad)), 0.0, 1e-15);
}

TEST(RankOneDeterminant, MatchesDenseDeterminant) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const Matrix a = random_spd(gen, n);
    const SpdMatrix a_spd(a);
    const auto v = random_vector(gen, n);
    const double quad = a_spd.inverse_quad_form(v);
    const double t = unit(gen) / std::sqrt(quad);
    const Matrix shifted = a - [&] {
      Matrix o = outer(v);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) o(i, j) *= t * t;
      }
      return o;
    }();
    const double dense = determinant(shifted);
    const double lemma = rank1_det_update(a_spd.determinant(), quad, t);
    EXPECT_NEAR(lemma, dense, 1e-10 * std::fabs(a_spd.determinant()));
  }
}

TEST(ShermanMorrison, Examples) {
  EXPECT_EQ(sherman_morrison_quad(0.0), 0.0);
  EXPECT_NEAR(sherman_morrison_quad(2.0 / 3), 2.0, 1e-15);
  EXPECT_NEAR(sherman_morrison_quad(0.5), 1.0, 1e-15);
  EXPECT_THROW(sherman_morrison_quad(1.0), DegenerateError);
  EXPECT_THROW(sherman_morrison_quad(1.5), DegenerateError);
  EXPECT_THROW(sherman_morrison_quad(-0.1), DomainError);
}

TEST(ShermanMorrison, MatchesDirectSolve) {
  std::mt19937_64 gen(23);
  int checked = 0;
  while (checked < 200) {
    const std::size_t n = 1 + checked % 6;
    const Matrix a = random_spd(gen, n);
    const auto v = random_vector(gen, n);
    const double quad_a = SpdMatrix(a).inverse_quad_form(v);
    if (quad_a >= 0.95) continue;
    const double direct = SpdMatrix(a - outer(v)).inverse_quad_form(v);
    EXPECT_NEAR(sherman_morrison_quad(quad_a), direct, 1e-10 * std::max(1.0, direct));
    ++checked;
  }
}

TEST(Matrix, BasicAlgebra) {
  const Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
  const Matrix t = m.transpose();
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t(2, 1), 6.0);
  const Matrix g = gram(m);
  EXPECT_EQ(g(0, 0), 17.0);
  EXPECT_EQ(g(1, 2), 2 * 3 + 5 * 6);
  const Matrix p = m * t;
  EXPECT_EQ(p(0, 1), 32.0);
  EXPECT_THROW(m * m, PreconditionError);
  EXPECT_NEAR(determinant(Matrix(2, 2, {0, 1, 1, 0})), -1.0, 1e-15);
}
