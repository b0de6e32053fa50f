#include <gtest/gtest.h>

#include <cmath>

#include "dgdmax/drlr.hpp"
#include "dgdmax/minty.hpp"
#include "dgdmax/random.hpp"
#include "dgdmax/simplex.hpp"
#include "oracles.hpp"

using namespace dgdmax;

namespace {

Dataset small_dataset(int samples, int features, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.samples = samples;
  spec.features = features;
  spec.seed = seed;
  return gen_synthetic(spec);
}

DrlrProblem make_problem(int samples, int features, int agents, std::uint64_t seed,
                         DrlrParams params = {}) {
  return DrlrProblem(small_dataset(samples, features, seed),
                     partition_dataset(samples, agents, seed + 1), params);
}

Vector random_vector(SplitMix64& rng, int n, double scale) {
  Vector v(n);
  for (int k = 0; k < n; ++k) v(k) = scale * rng.normal();
  return v;
}

double rel_error(const Vector& a, const Vector& b) { return (a - b).norm() / (1.0 + a.norm()); }

}  // namespace

TEST(Logistic, StableForLargeMargins) {
  EXPECT_NEAR(logistic_loss(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(logistic_loss(800.0), 0.0, 1e-300);
  EXPECT_NEAR(logistic_loss(-800.0), 800.0, 1e-12);
  for (double t : {-5.0, -0.3, 0.7, 4.0}) EXPECT_NEAR(logistic_loss(t), oracle::logistic(t), 1e-14);
  EXPECT_NEAR(sigmoid(0.0), 0.5, 1e-16);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
}

TEST(Drlr, GradXAtOriginSingleAgent) {
  const Dataset ds = small_dataset(12, 4, 3);
  DrlrParams params;
  const DrlrProblem p(ds, partition_dataset(12, 1, 1), params);
  const int n_samples = 12;
  const Vector y = Vector::Constant(n_samples, 1.0 / n_samples);
  Vector expected = Vector::Zero(4);
  const Matrix a = Matrix(ds.features);
  for (int j = 0; j < n_samples; ++j) expected += -ds.labels(j) * a.row(j).transpose() / 2.0;
  expected /= n_samples;
  EXPECT_LE((p.grad_x(0, Vector::Zero(4), y) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Drlr, GradXVanishesWithoutWeights) {
  DrlrParams params;
  params.beta_x = 0.0;
  const DrlrProblem p = make_problem(10, 3, 2, 4, params);
  SplitMix64 rng(1);
  const Vector x = random_vector(rng, 3, 1.0);
  EXPECT_EQ(p.grad_x(1, x, Vector::Zero(10)).norm(), 0.0);
}

TEST(Drlr, GradYAtOrigin) {
  const DrlrProblem p = make_problem(10, 3, 2, 5);
  const Vector y = Vector::Constant(10, 0.1);
  const Vector g = p.grad_y(0, Vector::Zero(3), y);
  std::vector<bool> own(10, false);
  for (int j : p.partition()[0]) own[j] = true;
  for (int j = 0; j < 10; ++j) EXPECT_NEAR(g(j), own[j] ? 2.0 * std::log(2.0) : 0.0, 1e-15);
}

TEST(Drlr, GradYIsAffineWithSlopeBetaY) {
  DrlrParams params;
  params.beta_y = 0.37;
  const DrlrProblem p = make_problem(15, 4, 3, 6, params);
  SplitMix64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(rng, 4, 1.0);
    const Vector y = random_vector(rng, 15, 1.0);
    const Vector y2 = random_vector(rng, 15, 1.0);
    const int i = static_cast<int>(rng.below(3));
    const Vector dg = p.grad_y(i, x, y) - p.grad_y(i, x, y2);
    EXPECT_LE((dg + 0.37 * (y - y2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR((y - y2).dot(dg), -0.37 * (y - y2).squaredNorm(), 1e-12);
    EXPECT_NEAR(dg.norm(), 0.37 * (y - y2).norm(), 1e-12);
  }
}

TEST(Drlr, GradientsMatchCentralDifferences) {
  const DrlrProblem p = make_problem(6, 3, 2, 7);
  SplitMix64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const int i = static_cast<int>(rng.below(2));
    const Vector x = random_vector(rng, 3, 1.0);
    const Vector y = random_vector(rng, 6, 0.5);
    const Vector gx = p.grad_x(i, x, y);
    const Vector gy = p.grad_y(i, x, y);
    const Vector fdx =
        oracle::central_difference([&](const Vector& z) { return p.value(i, z, y); }, x);
    const Vector fdy =
        oracle::central_difference([&](const Vector& z) { return p.value(i, x, z); }, y);
    EXPECT_LE(rel_error(gx, fdx), 1e-6);
    EXPECT_LE(rel_error(gy, fdy), 1e-6);
  }
}

TEST(Drlr, RegularizerAtOrigin) {
  const DrlrProblem p = make_problem(8, 5, 2, 8);
  EXPECT_EQ(p.v_x(Vector::Zero(5)), 0.0);
  EXPECT_EQ(p.grad_v_x(Vector::Zero(5)).norm(), 0.0);
}

TEST(Drlr, ConstantsAndDimensions) {
  DrlrParams params;
  params.beta_y = 0.25;
  const DrlrProblem p = make_problem(20, 4, 4, 9, params);
  EXPECT_EQ(p.agents(), 4);
  EXPECT_EQ(p.dim_x(), 4);
  EXPECT_EQ(p.dim_y(), 20);
  EXPECT_EQ(p.constants().mu, 0.25);
  EXPECT_EQ(p.constants().L_y, 0.25);
  EXPECT_GE(p.constants().L, p.constants().L_y);
  EXPECT_THROW(p.grad_x(4, Vector::Zero(4), Vector::Zero(20)), std::out_of_range);
  EXPECT_THROW(p.grad_x(0, Vector::Zero(3), Vector::Zero(20)), std::invalid_argument);
}

TEST(Drlr, RejectsBadInputs) {
  const Dataset ds = small_dataset(6, 2, 1);
  DrlrParams params;
  params.beta_y = 0.0;
  EXPECT_THROW(DrlrProblem(ds, partition_dataset(6, 2, 1), params), std::invalid_argument);
  EXPECT_THROW(DrlrProblem(ds, Partition{{0, 1, 2}, {3, 4}}, DrlrParams{}), std::invalid_argument);
  EXPECT_THROW(DrlrProblem(ds, Partition{{0, 1, 2, 3, 4, 5}, {}}, DrlrParams{}),
               std::invalid_argument);
}

TEST(DrlrLipschitz, ZeroFeaturesGiveBetaY) {
  Dataset ds;
  ds.features.resize(4, 2);
  ds.labels = Vector::Ones(4);
  DrlrParams params;
  params.beta_x = 0.0;
  params.beta_y = 0.3;
  const DrlrProblem p(ds, partition_dataset(4, 2, 1), params);
  EXPECT_NEAR(p.constants().L, 0.3, 1e-15);
}

TEST(DrlrLipschitz, SampledBelowAnalyticSingleSample) {
  Dataset ds;
  ds.features.resize(1, 2);
  ds.features.insert(0, 0) = 1.0;
  ds.labels = Vector::Ones(1);
  DrlrParams params;
  params.beta_x = 0.0;
  params.beta_y = 1.0;
  const DrlrProblem p(ds, Partition{{0}}, params);
  EXPECT_LE(p.lipschitz().sampled, p.lipschitz().analytic + 1e-12);
  EXPECT_GT(p.lipschitz().sampled, 0.0);
}

TEST(DrlrLipschitz, RandomPairsInBall) {
  const DrlrProblem p = make_problem(30, 5, 3, 10);
  const double L = p.constants().L;
  EXPECT_LE(p.lipschitz().sampled, p.lipschitz().analytic * (1.0 + 1e-9));
  SplitMix64 rng(4);
  auto on_simplex = [&](int n) {
    Vector y(n);
    for (int j = 0; j < n; ++j) y(j) = -std::log(1.0 - rng.uniform());
    return Vector(y / y.sum());
  };
  for (int k = 0; k < 1000; ++k) {
    const int i = static_cast<int>(rng.below(3));
    const Vector x = random_vector(rng, 5, 3.0);
    const Vector x2 = random_vector(rng, 5, 3.0);
    const Vector y = on_simplex(30);
    const Vector y2 = on_simplex(30);
    Vector g(35), g2(35);
    g << p.grad_x(i, x, y), p.grad_y(i, x, y);
    g2 << p.grad_x(i, x2, y2), p.grad_y(i, x2, y2);
    const double dist = std::sqrt((x - x2).squaredNorm() + (y - y2).squaredNorm());
    ASSERT_LE((g - g2).norm(), L * dist * (1.0 + 1e-12)) << k;
  }
}

TEST(DrlrLipschitz, OverrideWins) {
  DrlrParams params;
  params.lipschitz_override = 123.0;
  EXPECT_EQ(make_problem(10, 3, 2, 1, params).constants().L, 123.0);
}

TEST(DrlrDual, SymmetricLossesGiveUniform) {
  Dataset ds;
  ds.features.resize(6, 2);
  ds.labels = Vector::Ones(6);
  const DrlrProblem p(ds, partition_dataset(6, 1, 2), DrlrParams{});
  const Vector y = *p.exact_dual(0, Vector::Zero(2), Vector::Zero(6), p.constants().L);
  EXPECT_LE((y - Vector::Constant(6, 1.0 / 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DrlrDual, LargeBetaYApproachesUniform) {
  DrlrParams params;
  params.beta_y = 1e6;
  const DrlrProblem p = make_problem(12, 3, 3, 11, params);
  SplitMix64 rng(6);
  const Vector x = random_vector(rng, 3, 1.0);
  const Vector y = *p.exact_dual(1, x, Vector::Zero(12), p.constants().L);
  EXPECT_LE((y - Vector::Constant(12, 1.0 / 12)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(DrlrDual, MatchesEnumerationOracle) {
  const DrlrProblem p = make_problem(5, 3, 2, 12);
  const double L = p.constants().L;
  const int m = 2;
  SplitMix64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const int i = static_cast<int>(rng.below(2));
    const Vector x = random_vector(rng, 3, 1.0);
    const Vector lt = random_vector(rng, 5, 0.05);
    // d_i(y) = <c, y> - (beta_y / 2) ||y - 1/N||^2 + const on the simplex, so the
    // maximizer is the projection of 1/N + c / beta_y.
    Vector c = -(L * std::sqrt(double(m)) / 2.0) * lt;
    const Vector losses = p.sample_losses(x);
    for (int j : p.partition()[i]) c(j) += m * losses(j);
    const Vector expected =
        oracle::simplex_by_enumeration((Vector::Constant(5, 0.2) + c / p.params().beta_y).eval());
    EXPECT_LE((*p.exact_dual(i, x, lt, L) - expected).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(DrlrDual, PooledMaximizerBeatsSimplexSamples) {
  const DrlrProblem p = make_problem(8, 3, 2, 13);
  SplitMix64 rng(8);
  const Vector x = random_vector(rng, 3, 1.0);
  const Vector y = *p.exact_pooled_dual(x);
  auto pooled = [&](const Vector& v) { return 0.5 * (p.value(0, x, v) + p.value(1, x, v)); };
  const double best = pooled(y);
  for (int k = 0; k < 200; ++k) {
    Vector z(8);
    for (int j = 0; j < 8; ++j) z(j) = -std::log(1.0 - rng.uniform());
    z /= z.sum();
    EXPECT_LE(pooled(z), best + 1e-12);
  }
}

TEST(Minty, OperatorValues) {
  EXPECT_EQ(minty_operator(0.0, 0.0), std::make_pair(0.0, 0.0));
  const auto [a, b] = minty_operator(0.5, 2.0);
  EXPECT_EQ(a, -2.0);
  EXPECT_EQ(b, 0.25 - 2.0);
  EXPECT_EQ(ToyMintyInstance::grad_y(0.5, 2.0), -0.25 + 2.0);
}

TEST(Minty, OperatorMatchesFiniteDifferences) {
  SplitMix64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const double x = 2.0 * rng.uniform() - 1.0;
    const double y = 10.0 * rng.uniform() - 5.0;
    const double h = 1e-6;
    const double fx = (ToyMintyInstance::value(x + h, y) - ToyMintyInstance::value(x - h, y)) / (2 * h);
    const double fy = (ToyMintyInstance::value(x, y + h) - ToyMintyInstance::value(x, y - h)) / (2 * h);
    EXPECT_NEAR(ToyMintyInstance::grad_x(x, y), fx, 1e-6 * (1.0 + std::abs(fx)));
    EXPECT_NEAR(ToyMintyInstance::grad_y(x, y), fy, 1e-6 * (1.0 + std::abs(fy)));
  }
}

TEST(Minty, ConditionFailsOnGrid) {
  const MintyScanResult r = minty_scan(21, -1.0, 1.0, -5.0, 5.0, {1.0}, {-1000.0});
  EXPECT_EQ(r.candidates, 441);
  EXPECT_TRUE(r.condition_fails());
  EXPECT_LT(r.worst_product, 0.0);
  const MintyScanResult far = minty_scan(21, -1.0, 1.0, -5.0, 5.0, {1.0}, {-100.0});
  EXPECT_TRUE(far.condition_fails());
}
