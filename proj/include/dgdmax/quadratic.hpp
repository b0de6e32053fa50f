#pragma once

#include <cstdint>
#include <vector>

#include "dgdmax/problem.hpp"

namespace dgdmax {

/// f_i(x, y) = x^T A_i x / 2 + x^T B y + c_i^T x + d_i^T y - (mu/2) ||y||^2,
/// g(x) = l1_weight ||x||_1, h = 0. Every quantity has a closed form, which
/// makes this the reference instance for checking the optimizers.
class QuadraticProblem final : public MinimaxProblem {
 public:
  QuadraticProblem(std::vector<Matrix> a, Matrix b, std::vector<Vector> c, std::vector<Vector> d,
                   double mu, double l1_weight = 0.0);

  int agents() const override { return static_cast<int>(a_.size()); }
  int dim_x() const override { return static_cast<int>(b_.rows()); }
  int dim_y() const override { return static_cast<int>(b_.cols()); }
  ProblemConstants constants() const override { return constants_; }

  double value(int agent, const Vector& x, const Vector& y) const override;
  Vector grad_x(int agent, const Vector& x, const Vector& y) const override;
  Vector grad_y(int agent, const Vector& x, const Vector& y) const override;

  Vector prox_g(const Vector& z, double eta) const override;
  double g_value(const Vector& x) const override { return l1_ * x.lpNorm<1>(); }

  DualRegularizer dual_regularizer() const override { return DualRegularizer::Zero; }
  Vector prox_h(const Vector& z, double /*step*/) const override { return z; }

  std::optional<Vector> exact_dual(int agent, const Vector& x, const Vector& lambda_tilde,
                                   double L) const override;
  std::optional<Vector> exact_pooled_dual(const Vector& x) const override;
  bool has_exact_dual() const override { return true; }
  bool has_exact_pooled_dual() const override { return true; }

  /// Minimizer of p(x) = max_y f(x, y) when g = 0: solves (A + B B^T / mu) x = -(c + B d / mu).
  Vector primal_minimizer() const;

 private:
  std::vector<Matrix> a_;
  Matrix b_;
  std::vector<Vector> c_;
  std::vector<Vector> d_;
  double mu_;
  double l1_;
  ProblemConstants constants_;
};

/// Random instance with A_i symmetric (possibly indefinite) and
/// mean(A_i) + B B^T / mu positive definite, so p has a unique minimizer.
QuadraticProblem make_random_quadratic(int agents, int dim_x, int dim_y, double mu,
                                       std::uint64_t seed, double l1_weight = 0.0);

}  // namespace dgdmax
