#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace qfrac;
using namespace qfrac::testing;

namespace {

double ref_min_eig(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues()(0);
}

}  // namespace

TEST(AffinePencil, ConstructionChecks) {
  EXPECT_THROW(AffinePencil(SymMatrix::identity(2), SymMatrix::identity(3)),
               std::invalid_argument);
  EXPECT_THROW(AffinePencil(SymMatrix::identity(2), SymMatrix::identity(2),
                            SymMatrix::identity(2), MuDomain::absent),
               std::invalid_argument);
  const AffinePencil p(SymMatrix::identity(2), SymMatrix::identity(2));
  EXPECT_THROW(pencil_value(p, 0.0, 1.0), std::invalid_argument);
}

TEST(PencilValue, EqualsReferenceMinimumEigenvalue) {
  std::mt19937_64 rng(31);
  const AffinePencil p(random_sym(rng, 4), random_sym(rng, 4), random_sym(rng, 4),
                       MuDomain::free);
  for (int i = 0; i < 20; ++i) {
    const double s = std::normal_distribution<double>(0, 2)(rng);
    const double mu = std::normal_distribution<double>(0, 2)(rng);
    EXPECT_NEAR(pencil_value(p, s, mu), ref_min_eig(p.at(s, mu)), 1e-10);
  }
}

TEST(PencilValue, MidpointConcavity) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> nd(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const AffinePencil p(random_sym(rng, 3), random_sym(rng, 3), random_sym(rng, 3),
                         MuDomain::free);
    const double s1 = nd(rng), s2 = nd(rng), m1 = nd(rng), m2 = nd(rng);
    const double mid = pencil_value(p, 0.5 * (s1 + s2), 0.5 * (m1 + m2));
    const double avg = 0.5 * (pencil_value(p, s1, m1) + pencil_value(p, s2, m2));
    EXPECT_GE(mid, avg - 1e-9 * p.scale());
  }
}

TEST(MaximizeConcave, FindsInteriorAndCapMaxima) {
  auto noise = [](double) { return 1e-14; };
  const auto r = detail::maximize_concave([](double x) { return -(x - 3) * (x - 3); }, 0.0,
                                          -100.0, 100.0, 1e-10, noise);
  EXPECT_NEAR(r.x, 3.0, 1e-6);
  EXPECT_FALSE(r.at_cap);
  const auto capped = detail::maximize_concave([](double x) { return x; }, 0.0, -10.0, 10.0,
                                               1e-10, noise);
  EXPECT_NEAR(capped.x, 10.0, 1e-6);
  EXPECT_TRUE(capped.at_cap);
}

TEST(SupLambda, ScalarShiftPencil) {
  // diag(1, 3) - s I >= 0 iff s <= 1
  const AffinePencil p(SymMatrix::diagonal(vec({1, 3})), -1.0 * SymMatrix::identity(2));
  const LmiSolution s = sup_lambda(p, 0.0);
  // Overshoot is bounded by the PSD tolerance tol_psd * scale.
  const double slack = 1e-8 * p.scale();
  EXPECT_NEAR(s.lambda_star.value(), 1.0, slack);
  EXPECT_EQ(s.status, LmiStatus::attained);
  EXPECT_NEAR(sup_lambda(p, 50.0).lambda_star.value(), 1.0, slack);
}

TEST(SupLambda, ShallowSlopeIsTightened) {
  // diag(1, 1) - 1e-3 s E11 >= 0 iff s <= 1000; psi = -tol_psd*scale is
  // reached 2e-5 past the root.
  const AffinePencil p(SymMatrix::identity(2), SymMatrix::diagonal(vec({-1e-3, 0})));
  const LmiSolution s = sup_lambda(p, 0.0);
  EXPECT_NEAR(s.lambda_star.value(), 1000.0, 1e-6);
  EXPECT_GE(s.lambda_star.value(), 1000.0 - 1e-6);
  EXPECT_EQ(s.status, LmiStatus::attained);
}

TEST(SupLambda, InfeasibleAndUnbounded) {
  const AffinePencil never(SymMatrix::diagonal(vec({-1, 1})), SymMatrix::zero(2));
  EXPECT_EQ(sup_lambda(never).status, LmiStatus::infeasible);
  EXPECT_TRUE(sup_lambda(never).lambda_star.is_neg_inf());
  const AffinePencil always(SymMatrix::zero(2), SymMatrix::identity(2));
  EXPECT_EQ(sup_lambda(always).status, LmiStatus::unbounded_above);
  EXPECT_TRUE(sup_lambda(always).lambda_star.is_pos_inf());
}

TEST(SupLambda, UnconstrainedRatioValue) {
  // (x^2 + 1)/(x^2 + 2) has infimum 1/2 at x = 0.
  const AffinePencil p(homogenize(form(1, {1}, {0}, 1)), -1.0 * homogenize(form(1, {1}, {0}, 2)));
  EXPECT_NEAR(sup_lambda(p, 0.0).lambda_star.value(), 0.5, 1e-7);
}

TEST(SupNu, TrustRegionDual) {
  // inf { -x^2 : x^2 - 1 <= 0 } = -1 with multiplier 1.
  const AffinePencil p = parametric_pencil(form(1, {-1}, {0}, 0), QuadraticForm::zero(1), 0.0,
                                           nullptr, MuDomain::absent);
  EXPECT_EQ(sup_nu(p).status, LmiStatus::infeasible);
  const QuadraticForm g = form(1, {1}, {0}, -1);
  const AffinePencil q = parametric_pencil(form(1, {-1}, {0}, 0), QuadraticForm::zero(1), 0.0,
                                           &g, MuDomain::nonnegative);
  const LmiSolution s = sup_nu(q);
  EXPECT_NEAR(s.lambda_star.value(), -1.0, 1e-7);
  EXPECT_NEAR(*s.mu_star, 1.0, 1e-3);
}

TEST(SupNu, EqualityConstraintWithFreeMultiplier) {
  // inf { 2x : x^2 = 1 } = -2, multiplier 1.
  const QuadraticForm h = form(1, {1}, {0}, -1);
  const AffinePencil p = parametric_pencil(form(1, {0}, {1}, 0), QuadraticForm::zero(1), 0.0,
                                           &h, MuDomain::free);
  const LmiSolution s = sup_nu(p);
  EXPECT_NEAR(s.lambda_star.value(), -2.0, 1e-7);
  EXPECT_NEAR(*s.mu_star, 1.0, 1e-3);
}

TEST(SupNu, MultiplierRunsToTheCapWithoutSlater) {
  // inf { 2x : x^2 <= 0 } = 0 but no dual multiplier attains it: nu = -1/(4 mu)
  // reaches the PSD tolerance only for mu of order 1/tol.
  const QuadraticForm g = form(1, {1}, {0}, 0);
  const AffinePencil p = parametric_pencil(form(1, {0}, {1}, 0), QuadraticForm::zero(1), 0.0,
                                           &g, MuDomain::nonnegative);
  const LmiSolution s = sup_nu(p);
  EXPECT_NEAR(s.lambda_star.value(), 0.0, 1e-6);
  EXPECT_GT(*s.mu_star, 1e5);
  LmiOptions tight;
  tight.mu_cap = 1e3;
  EXPECT_EQ(sup_nu(p, 0.0, tight).status, LmiStatus::mu_escaped);
}

TEST(SupNu, RejectsWrongM1) {
  const AffinePencil p(SymMatrix::identity(2), SymMatrix::identity(2));
  EXPECT_THROW(sup_nu(p), std::invalid_argument);
}

TEST(MuInterval, RecoversKnownInterval) {
  // diag(mu, 2 - mu) >= 0 iff 0 <= mu <= 2.
  const AffinePencil p(SymMatrix::diagonal(vec({0, 2})), SymMatrix::zero(2),
                       SymMatrix::diagonal(vec({1, -1})), MuDomain::free);
  const auto [lo, hi] = mu_interval(p, 0.0, 0.0);
  EXPECT_NEAR(lo, 0.0, 1e-8);
  EXPECT_NEAR(hi, 2.0, 1e-8);
}

TEST(LmiOptions, FromTolerance) {
  const LmiOptions o = LmiOptions::from_tolerance(1e-6);
  EXPECT_DOUBLE_EQ(o.tol_psd, 1e-6);
  EXPECT_DOUBLE_EQ(o.tol_lambda, 1e-7);
  const AffinePencil p(SymMatrix::identity(2), SymMatrix::identity(2));
  EXPECT_DOUBLE_EQ(o.psd_threshold(p), 1e-6 * p.scale());
  LmiOptions fixed = o;
  fixed.psd_abs = 0.25;
  EXPECT_DOUBLE_EQ(fixed.psd_threshold(p), 0.25);
}

TEST(SupLambda, RandomPencilsAgreeWithDenseScan) {
  // Reference: scan s on a fine grid with a brute-force mu search.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix m0(random_spd(rng, 3, 1.0, 2.0));
    const SymMatrix m1 = -1.0 * random_spd(rng, 3, 0.5, 1.0);
    const AffinePencil p(m0, m1);
    const double s = sup_lambda(p).lambda_star.value();
    EXPECT_GE(ref_min_eig(p.at(s - 1e-6, std::nullopt)), -1e-7);
    EXPECT_LT(ref_min_eig(p.at(s + 1e-5, std::nullopt)), 0.0);
  }
}
