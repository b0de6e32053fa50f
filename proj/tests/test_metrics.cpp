#include <gtest/gtest.h>

#include <cmath>

#include "dgdmax/dgdmax.hpp"
#include "dgdmax/drlr.hpp"
#include "dgdmax/metrics.hpp"
#include "dgdmax/quadratic.hpp"
#include "dgdmax/schedule.hpp"
#include "oracles.hpp"

using namespace dgdmax;

namespace {

DrlrProblem drlr_fixture(int samples, int agents, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.samples = samples;
  spec.features = 4;
  spec.seed = seed;
  DrlrParams params;
  params.beta_y = 0.2;
  return DrlrProblem(gen_synthetic(spec), partition_dataset(samples, agents, seed), params);
}

Vector random_vector(SplitMix64& rng, int n, double scale = 1.0) {
  Vector v(n);
  for (int k = 0; k < n; ++k) v(k) = scale * rng.normal();
  return v;
}

Matrix random_matrix(SplitMix64& rng, int r, int c, double scale = 1.0) {
  Matrix a(r, c);
  for (int i = 0; i < r; ++i) a.row(i) = random_vector(rng, c, scale).transpose();
  return a;
}

}  // namespace

TEST(Deviation, SplitsMeanAndPerp) {
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 12;
  const auto [avg, perp] = deviation(x);
  EXPECT_EQ(avg.row(0), avg.row(2));
  EXPECT_DOUBLE_EQ(avg(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(avg(0, 1), 6.0);
  EXPECT_LE((avg + perp - x).norm(), 1e-15);
  EXPECT_LE(perp.colwise().sum().norm(), 1e-14);
}

TEST(Deviation, ConsensusHasNoPerp) {
  const Matrix x = Vector::LinSpaced(4, -1.0, 2.0).transpose().replicate(5, 1);
  EXPECT_EQ(deviation(x).second.norm(), 0.0);
}

TEST(ProxGradMapping, NoRegularizerGivesGradientNorm) {
  const QuadraticProblem p = make_random_quadratic(1, 3, 1, 1.0, 1);
  Vector g(3);
  g << 3.0, 0.0, -4.0;
  EXPECT_NEAR(prox_grad_mapping(p, Vector::Ones(3), 0.1, g), 5.0, 1e-12);
  EXPECT_THROW(prox_grad_mapping(p, Vector::Ones(3), 0.0, g), std::invalid_argument);
  EXPECT_THROW(prox_grad_mapping(p, Vector::Ones(3), -1.0, g), std::invalid_argument);
}

TEST(ProxGradMapping, SoftThresholdAtOrigin) {
  // With l1 weight 1 the origin is stationary whenever |g_k| <= 1.
  const QuadraticProblem p = make_random_quadratic(1, 2, 1, 1.0, 2, 1.0);
  Vector g(2);
  g << 0.5, -0.9;
  EXPECT_EQ(prox_grad_mapping(p, Vector::Zero(2), 0.3, g), 0.0);
}

TEST(GradP, MatchesFiniteDifferencesOfP) {
  const DrlrProblem p = drlr_fixture(20, 2, 3);
  auto p_value = [&](const Vector& x) {
    const Vector y = pooled_argmax(p, x);
    double v = 0.0;
    for (int i = 0; i < p.agents(); ++i) v += p.value(i, x, y);
    return v / p.agents();
  };
  SplitMix64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(rng, 4);
    const Vector g = grad_p(p, x);
    const Vector fd = oracle::central_difference(p_value, x);
    EXPECT_LE((g - fd).norm() / (1.0 + g.norm()), 1e-5);
  }
}

TEST(LambdaGrad, ZeroForSingleAgentAndConsensus) {
  const QuadraticProblem q = make_random_quadratic(1, 2, 2, 0.5, 5);
  const MixingMatrix w1 = laplacian_mixing(Graph(1, {}));
  SplitMix64 rng(6);
  const Vector x = random_vector(rng, 2);
  EXPECT_EQ(lambda_grad(q, w1, x, Matrix::Zero(1, 2), Matrix::Zero(1, 2), true).value, 0.0);

  const MixingMatrix w = laplacian_mixing(ring_graph(4));
  const Matrix y = random_vector(rng, 3).transpose().replicate(4, 1);
  const QuadraticProblem q4 = make_random_quadratic(4, 2, 3, 0.5, 8);
  const LambdaGrad surrogate = lambda_grad(q4, w, x, Matrix::Zero(4, 3), y, false);
  EXPECT_TRUE(surrogate.surrogate);
  EXPECT_LE(surrogate.value, 1e-14);
}

TEST(LambdaGrad, ClosedForm) {
  const QuadraticProblem q = make_random_quadratic(3, 2, 2, 0.5, 9);
  const MixingMatrix w = laplacian_mixing(complete_graph(3));
  SplitMix64 rng(10);
  const Matrix y = random_matrix(rng, 3, 2);
  const double L = q.constants().L;
  const double expected = L / (2.0 * std::sqrt(3.0)) * (w.weights * y - y).norm();
  EXPECT_NEAR(lambda_grad(q, w, Vector::Zero(2), Matrix::Zero(3, 2), y, false).value, expected,
              1e-14 * (1.0 + expected));
}

TEST(LambdaGrad, SurrogateWithinBound) {
  const DrlrProblem p = drlr_fixture(24, 4, 11);
  const MixingMatrix w = laplacian_mixing(ring_graph(4));
  const double L = p.constants().L;
  SplitMix64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(rng, 4);
    const Matrix lambda = random_matrix(rng, 4, 24, 0.01);
    const Matrix y_hat = consensus_dual_argmax(p, w, x, lambda);
    Matrix y = y_hat;
    for (int i = 0; i < 4; ++i)
      y.row(i) = p.prox_h((y_hat.row(i).transpose() + random_vector(rng, 24, 0.01)).eval(), 1.0)
                     .transpose();
    const double exact = lambda_grad(p, w, x, lambda, y, true).value;
    const double approx = lambda_grad(p, w, x, lambda, y, false).value;
    const double bound = L / (2.0 * std::sqrt(4.0)) * w.op_norm_w_minus_i * (y - y_hat).norm();
    EXPECT_LE(std::abs(exact - approx), bound * (1.0 + 1e-12) + 1e-15);
  }
}

TEST(TrackingResidual, InvariantAlongRun) {
  const DrlrProblem p = drlr_fixture(30, 3, 13);
  const MixingMatrix w = laplacian_mixing(ring_graph(3));
  const DecentralizedGdmax alg(p, w, paper_schedule(p.constants(), w.rho));
  SplitMix64 rng(14);
  NetworkState s = alg.init(random_vector(rng, 4));
  EXPECT_LE(tracking_residual(s.V, p, s.X, s.Y), 1e-12);
  for (int t = 0; t < 100; ++t) s = alg.step(s);
  EXPECT_LE(tracking_residual(s.V, p, s.X, s.Y), 1e-10);
  const Matrix shifted = s.V.rowwise() + Vector::Constant(4, 0.5).transpose();
  EXPECT_NEAR(tracking_residual(shifted, p, s.X, s.Y), 1.0, 1e-9);
  EXPECT_THROW(tracking_residual(s.V.topRows(2), p, s.X, s.Y), std::invalid_argument);
}

TEST(StationarityReport, FieldsAndFlags) {
  const DrlrProblem p = drlr_fixture(30, 3, 15);
  const MixingMatrix w = laplacian_mixing(ring_graph(3));
  const DecentralizedGdmax alg(p, w, paper_schedule(p.constants(), w.rho));
  SplitMix64 rng(16);
  NetworkState s = alg.init(random_vector(rng, 4));
  for (int t = 0; t < 3; ++t) s = alg.step(s);
  const double eta = alg.schedule().eta_x;
  const StationarityReport r = stationarity_report(p, w, s, eta);
  const Vector x_avg = s.X.colwise().mean().transpose();
  EXPECT_FALSE(r.lambda_grad_is_surrogate);
  ASSERT_TRUE(r.prox_grad_norm_p.has_value());
  EXPECT_NEAR(*r.prox_grad_norm_p, prox_grad_mapping(p, x_avg, eta, grad_p(p, x_avg)), 1e-14);
  EXPECT_NEAR(r.consensus_x, p.constants().L * r.consensus_x_raw, 1e-15);
  EXPECT_NEAR(r.consensus_x_raw, deviation(s.X).second.norm() / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.lambda_grad_norm, lambda_grad(p, w, x_avg, s.Lambda, s.Y, true).value, 1e-14);
  const Matrix y_hat = consensus_dual_argmax(p, w, x_avg, s.Lambda);
  EXPECT_NEAR(r.prox_grad_norm_P, grad_P_x(p, x_avg, y_hat).norm(), 1e-12);
}

TEST(StationarityReport, PooledMetricMissingWithoutOracle) {
  // A wrapper hiding the closed forms forces the surrogate path.
  struct Opaque final : MinimaxProblem {
    explicit Opaque(const QuadraticProblem& q) : q(q) {}
    const QuadraticProblem& q;
    int agents() const override { return q.agents(); }
    int dim_x() const override { return q.dim_x(); }
    int dim_y() const override { return q.dim_y(); }
    ProblemConstants constants() const override { return q.constants(); }
    double value(int i, const Vector& x, const Vector& y) const override { return q.value(i, x, y); }
    Vector grad_x(int i, const Vector& x, const Vector& y) const override { return q.grad_x(i, x, y); }
    Vector grad_y(int i, const Vector& x, const Vector& y) const override { return q.grad_y(i, x, y); }
    DualRegularizer dual_regularizer() const override { return DualRegularizer::Zero; }
    Vector prox_h(const Vector& z, double) const override { return z; }
  };
  const QuadraticProblem q = make_random_quadratic(2, 2, 2, 1.0, 17);
  const Opaque p(q);
  const MixingMatrix w = laplacian_mixing(complete_graph(2));
  const DecentralizedGdmax alg(p, w, paper_schedule(p.constants(), w.rho));
  NetworkState s = alg.init(Vector::Ones(2));
  s = alg.step(s);
  EXPECT_GT(s.subsolver_iters, 0);
  const StationarityReport r = stationarity_report(p, w, s, alg.schedule().eta_x);
  EXPECT_TRUE(r.lambda_grad_is_surrogate);
  EXPECT_FALSE(r.prox_grad_norm_p.has_value());
}
