#include <gtest/gtest.h>

#include <cmath>

#include "dgdmax/centralized.hpp"
#include "dgdmax/drlr.hpp"
#include "dgdmax/metrics.hpp"
#include "dgdmax/quadratic.hpp"
#include "dgdmax/schedule.hpp"

using namespace dgdmax;

namespace {

struct ExplicitQuadratic {
  std::vector<Matrix> a;
  Matrix b;
  std::vector<Vector> c;
  std::vector<Vector> d;
  double mu;

  QuadraticProblem problem() const { return QuadraticProblem(a, b, c, d, mu); }

  // p(x) = x^T A x / 2 + c^T x + ||B^T x + d||^2 / (2 mu) with means over agents.
  Vector grad_p(const Vector& x) const {
    Matrix a_bar = Matrix::Zero(b.rows(), b.rows());
    Vector c_bar = Vector::Zero(b.rows()), d_bar = Vector::Zero(b.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a_bar += a[i];
      c_bar += c[i];
      d_bar += d[i];
    }
    const double m = static_cast<double>(a.size());
    a_bar /= m;
    c_bar /= m;
    d_bar /= m;
    return (a_bar + b * b.transpose() / mu) * x + c_bar + b * d_bar / mu;
  }
};

ExplicitQuadratic two_agent_quadratic() {
  ExplicitQuadratic q;
  Matrix a1(2, 2), a2(2, 2);
  a1 << 2.0, 0.5, 0.5, -0.5;
  a2 << 0.0, -0.5, -0.5, 1.5;
  q.a = {a1, a2};
  q.b.resize(2, 1);
  q.b << 1.0, -0.5;
  Vector c1(2), c2(2), d1(1), d2(1);
  c1 << 0.3, -1.0;
  c2 << -0.1, 0.4;
  d1 << 0.2;
  d2 << -0.6;
  q.c = {c1, c2};
  q.d = {d1, d2};
  q.mu = 2.0;
  return q;
}

DrlrProblem drlr_fixture(double beta_y) {
  SyntheticSpec spec;
  spec.samples = 60;
  spec.features = 5;
  spec.seed = 3;
  DrlrParams params;
  params.beta_y = beta_y;
  return DrlrProblem(gen_synthetic(spec), partition_dataset(60, 1, 1), params);
}

}  // namespace

TEST(Gdmax, MatchesHandRecursion) {
  const ExplicitQuadratic q = two_agent_quadratic();
  const QuadraticProblem p = q.problem();
  Vector x(2);
  x << 1.0, -2.0;
  Vector expected = x;
  const double eta = 0.1;
  const CentralizedResult r = gdmax_run(p, x, eta, 20);
  ASSERT_EQ(r.prox_grad.size(), 20u);
  for (int t = 0; t < 20; ++t) {
    EXPECT_NEAR(r.prox_grad[t], q.grad_p(expected).norm(), 1e-12 * (1.0 + q.grad_p(expected).norm()));
    if (t < 19) expected -= eta * q.grad_p(expected);
  }
  EXPECT_LE((r.x - expected).norm(), 1e-12);
  EXPECT_LE((gdmax_step(p, x, eta) - (x - eta * q.grad_p(x))).norm(), 1e-13);
}

TEST(Gdmax, StationaryStartStaysPut) {
  const QuadraticProblem p = make_random_quadratic(3, 4, 2, 0.5, 4);
  const Vector x = p.primal_minimizer();
  const CentralizedResult r = gdmax_run(p, x, 0.05, 10);
  EXPECT_LE(r.prox_grad.front(), 1e-10);
  EXPECT_LE((r.x - x).norm(), 1e-10);
}

TEST(Gdmax, ObserverStopsEarly) {
  const QuadraticProblem p = make_random_quadratic(2, 3, 2, 0.5, 5);
  long seen = 0;
  const CentralizedResult r = gdmax_run(p, Vector::Ones(3), 0.01, 100, [&](long t, const Vector&,
                                                                            const Vector&, double) {
    seen = t;
    return t < 4;
  });
  EXPECT_EQ(seen, 4);
  EXPECT_EQ(r.prox_grad.size(), 5u);
}

TEST(Gdmax, DecreasesDrlrMetric) {
  const DrlrProblem p = drlr_fixture(1.0);
  const ProblemConstants k = p.constants();
  const double eta = default_stepsizes(k.L, k.kappa(), 0.0).eta_x;
  const CentralizedResult r = gdmax_run(p, Vector::Zero(5), eta, 3000);
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.prox_grad.back(), r.prox_grad.front() / 100.0);
}

TEST(Gdmax, DivergenceIsFlagged) {
  const ExplicitQuadratic q = two_agent_quadratic();
  const QuadraticProblem p = q.problem();
  const CentralizedResult r = gdmax_run(p, Vector::Ones(2), 50.0, 1000);
  EXPECT_TRUE(r.diverged);
  EXPECT_GT(r.diverged_at, 0);
  EXPECT_EQ(static_cast<long>(r.prox_grad.size()), r.diverged_at);
}

TEST(Gdmax, RejectsBadArguments) {
  const QuadraticProblem p = make_random_quadratic(1, 2, 1, 1.0, 6);
  EXPECT_THROW(gdmax_run(p, Vector::Zero(2), 0.0, 10), std::invalid_argument);
  EXPECT_THROW(gdmax_run(p, Vector::Zero(2), 0.1, 0), std::invalid_argument);
}

TEST(Gda, SaddleIsFixedPoint) {
  const QuadraticProblem p = make_random_quadratic(2, 3, 2, 0.8, 7);
  const Vector x = p.primal_minimizer();
  const Vector y = *p.exact_pooled_dual(x);
  const GdaState next = gda_step(p, GdaState{x, y, 0.05, 0.1});
  EXPECT_LE((next.x - x).norm(), 1e-12);
  EXPECT_LE((next.y - y).norm(), 1e-12);
}

TEST(Gda, SimultaneousUpdate) {
  const ExplicitQuadratic q = two_agent_quadratic();
  const QuadraticProblem p = q.problem();
  Vector x(2), y(1);
  x << 0.5, 1.0;
  y << -0.3;
  const GdaState next = gda_step(p, GdaState{x, y, 0.1, 0.2});
  Vector gx = Vector::Zero(2), gy = Vector::Zero(1);
  for (int i = 0; i < 2; ++i) {
    gx += 0.5 * (q.a[i] * x + q.b * y + q.c[i]);
    gy += 0.5 * (q.b.transpose() * x + q.d[i] - q.mu * y);
  }
  EXPECT_LE((next.x - (x - 0.1 * gx)).norm(), 1e-15);
  EXPECT_LE((next.y - (y + 0.2 * gy)).norm(), 1e-15);
}

TEST(Gda, ConvergesOnQuadratic) {
  const QuadraticProblem p = make_random_quadratic(2, 3, 2, 1.0, 8);
  const double L = p.constants().L;
  const CentralizedResult r =
      gda_run(p, Vector::Ones(3), Vector::Zero(2), 0.02 / L, 0.5 / L, 20000);
  EXPECT_FALSE(r.diverged);
  EXPECT_LT(r.prox_grad.back(), 1e-6 * r.prox_grad.front());
}

TEST(Gda, DivergenceIsFlagged) {
  const QuadraticProblem p = make_random_quadratic(2, 3, 2, 1.0, 9);
  const CentralizedResult r = gda_run(p, Vector::Ones(3), Vector::Zero(2), 100.0, 100.0, 500);
  EXPECT_TRUE(r.diverged);
}
