#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qfrac;
using namespace qfrac::testing;

TEST(QuadraticForm, LinearTermCarriesFactorTwo) {
  const QuadraticForm q = form(2, {1, 2, 2, 3}, {1, -1}, 4);
  // x = (1, 2): 1 + 2*2*2 + 3*4 + 2*(1 - 2) + 4 = 23
  EXPECT_DOUBLE_EQ(evaluate(q, vec({1, 2})), 23.0);
}

TEST(QuadraticForm, EvaluateRejectsWrongLength) {
  EXPECT_THROW(evaluate(QuadraticForm::zero(2), vec({1, 2, 3})), std::invalid_argument);
  EXPECT_THROW(QuadraticForm(SymMatrix::identity(2), vec({1}), 0.0), std::invalid_argument);
}

TEST(QuadraticForm, HomogenizationIdentity) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const QuadraticForm q = random_form(rng, n);
    const Vector x = random_vector(rng, n, 3.0);
    Vector y(n + 1);
    y << x, 1.0;
    const double lhs = y.dot(homogenize(q).matrix() * y);
    EXPECT_NEAR(lhs, evaluate(q, x), 1e-10 * (1 + std::abs(lhs)));
  }
}

TEST(QuadraticForm, ShiftAndRestrictAreCompositions) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const QuadraticForm q = random_form(rng, 3);
    const Vector o = random_vector(rng, 3);
    const Vector x = random_vector(rng, 3);
    EXPECT_NEAR(evaluate(shift(q, o), x), evaluate(q, x + o), 1e-10);
    const Matrix w = random_matrix(rng, 3, 2);
    const Vector z = random_vector(rng, 2);
    EXPECT_NEAR(evaluate(restrict_affine(q, o, w), z), evaluate(q, o + w * z), 1e-9);
  }
}

TEST(QuadraticForm, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  const QuadraticForm q = random_form(rng, 3);
  const Vector x = random_vector(rng, 3);
  const Vector g = gradient(q, x);
  for (int i = 0; i < 3; ++i) {
    Vector e = Vector::Zero(3);
    e(i) = 1e-6;
    EXPECT_NEAR((evaluate(q, x + e) - evaluate(q, x - e)) / 2e-6, g(i), 1e-6);
  }
}

TEST(InfSup, DefiniteIndefiniteAndSemidefinite) {
  // x^2 + 2x + 3 = (x + 1)^2 + 2
  auto [lo, hi] = inf_sup(form(1, {1}, {1}, 3));
  EXPECT_NEAR(lo.value(), 2.0, 1e-12);
  EXPECT_TRUE(hi.is_pos_inf());
  std::tie(lo, hi) = inf_sup(form(2, {1, 0, 0, -1}, {0, 0}, 0));
  EXPECT_TRUE(lo.is_neg_inf());
  EXPECT_TRUE(hi.is_pos_inf());
  // x2^2 + 2 x1: linear part outside range(A)
  std::tie(lo, hi) = inf_sup(form(2, {0, 0, 0, 1}, {1, 0}, 0));
  EXPECT_TRUE(lo.is_neg_inf());
  // -(x1 - 1)^2 - 4 has sup -4
  std::tie(lo, hi) = inf_sup(form(2, {-1, 0, 0, 0}, {1, 0}, -5));
  EXPECT_NEAR(hi.value(), -4.0, 1e-12);
  EXPECT_FALSE(minimizer(form(1, {-1}, {0}, 0)).has_value());
}

TEST(InfSup, RandomDefiniteAgainstClosedForm) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const QuadraticForm q{random_spd(rng, 3, 0.5, 3.0), random_vector(rng, 3), 0.7};
    const Vector xs = -q.A.matrix().inverse() * q.b;
    EXPECT_NEAR(inf_sup(q).first.value(), evaluate(q, xs), 1e-9);
  }
}

TEST(ScalarRoots, AgreeWithQuadraticFormula) {
  // s^2 - 3 s + 2 = 0 written as alpha s^2 + 2 beta s + gamma
  const auto r = detail::scalar_quadratic_roots(1.0, -1.5, 2.0, 1.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 1.0, 1e-14);
  EXPECT_NEAR(r[1], 2.0, 1e-14);
  EXPECT_TRUE(detail::scalar_quadratic_roots(1.0, 0.0, 1.0, 1.0).empty());
  const auto lin = detail::scalar_quadratic_roots(0.0, 1.0, -4.0, 1.0);
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_DOUBLE_EQ(lin[0], 2.0);
}

TEST(FindLevelPoint, LandsOnLevelOrReportsEmpty) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const QuadraticForm q = random_form(rng, 1 + trial % 4);
    const double level = std::normal_distribution<double>(0, 3)(rng);
    const auto [lo, hi] = inf_sup(q);
    const auto x = find_level_point(q, level);
    if (level > lo.value() + 1e-6 && level < hi.value() - 1e-6) {
      ASSERT_TRUE(x.has_value());
    }
    if (x) {
      EXPECT_LE(std::abs(evaluate(q, *x) - level), feas_tolerance(level));
    }
  }
  EXPECT_FALSE(find_level_point(form(1, {1}, {0}, 0), -1.0).has_value());
  EXPECT_FALSE(find_level_point(form(2, {-1, 0, 0, -1}, {0, 0}, 0), 0.5).has_value());
}

TEST(FindLevelPoint, BilinearForm) {
  const QuadraticForm q = form(2, {0, 1, 1, 0}, {0, 0}, 0);  // 2 x1 x2
  for (double level : {-3.0, 0.5, 7.0}) {
    const auto x = find_level_point(q, level);
    ASSERT_TRUE(x.has_value());
    EXPECT_NEAR(evaluate(q, *x), level, feas_tolerance(level));
  }
}

TEST(ExtendedReal, OrderingAndFormatting) {
  EXPECT_LT(ExtendedReal::neg_inf(), ExtendedReal(-1e300));
  EXPECT_LT(ExtendedReal(1e300), ExtendedReal::pos_inf());
  EXPECT_EQ(to_string(ExtendedReal::neg_inf()), "-inf");
  EXPECT_EQ(to_string(ExtendedReal::pos_inf()), "+inf");
  EXPECT_EQ(to_string(ExtendedReal(0.5)), "0.5");
}

TEST(FractionalProblem, ValidationAndFeasibility) {
  FractionalProblem p{form(1, {1}, {0}, 1), form(1, {1}, {0}, 2), form(1, {1}, {0}, 0), 1.0, 4.0};
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(p.constrained());
  EXPECT_TRUE(p.feasible(vec({1.5}), 0.0));
  EXPECT_FALSE(p.feasible(vec({0.5}), 0.0));
  EXPECT_FALSE(p.feasible(vec({2.5}), 0.0));
  EXPECT_DOUBLE_EQ(p.ratio(vec({1.0})), 2.0 / 3.0);
  p.u = 5.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.u = 1.0;
  p.f2 = QuadraticForm::zero(2);
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(FractionalProblem, TranslateMovesTheFeasibleSet) {
  std::mt19937_64 rng(26);
  FractionalProblem p{random_form(rng, 2), random_form(rng, 2), random_form(rng, 2), -1.0, 1.0};
  const Vector o = vec({0.3, -2.0});
  const FractionalProblem t = translate(p, o);
  const Vector y = vec({0.1, 0.2});
  EXPECT_NEAR(evaluate(*t.g, y), evaluate(*p.g, y + o), 1e-12);
  EXPECT_NEAR(t.ratio(y), p.ratio(y + o), 1e-10);
}
