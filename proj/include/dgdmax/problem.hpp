#pragma once

#include <optional>

#include "dgdmax/types.hpp"

namespace dgdmax {

/// Smoothness and concavity moduli shared by all agents.
struct ProblemConstants {
  double L = 1.0;    // joint smoothness of every f_i
  double mu = 1.0;   // strong concavity of f_i(x, .)
  double L_y = 1.0;  // smoothness of f_i(x, .)

  double kappa() const { return L / mu; }
  double kappa_y() const { return L_y / mu; }
};

enum class DualRegularizer { Zero, Simplex };

/// min_x max_y (1/m) sum_i f_i(x, y) + g(x) - h(y), with f_i held by agent i.
///
/// Implementations are immutable after construction and every member is
/// safe to call concurrently.
class MinimaxProblem {
 public:
  virtual ~MinimaxProblem() = default;

  virtual int agents() const = 0;
  virtual int dim_x() const = 0;
  virtual int dim_y() const = 0;
  virtual ProblemConstants constants() const = 0;

  virtual double value(int agent, const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_x(int agent, const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_y(int agent, const Vector& x, const Vector& y) const = 0;

  /// prox_{eta g}(z); identity when g = 0.
  virtual Vector prox_g(const Vector& z, double /*eta*/) const { return z; }
  /// g(x) (0 when g = 0).
  virtual double g_value(const Vector& /*x*/) const { return 0.0; }

  virtual DualRegularizer dual_regularizer() const = 0;
  /// prox_{step h}(z); a projection when h is an indicator.
  virtual Vector prox_h(const Vector& z, double step) const = 0;

  /// argmax_y f_i(x, y) - h(y) - (L sqrt(m) / 2) <lambda_tilde, y>, if a closed form exists.
  virtual std::optional<Vector> exact_dual(int /*agent*/, const Vector& /*x*/,
                                           const Vector& /*lambda_tilde*/,
                                           double /*L*/) const {
    return std::nullopt;
  }
  /// argmax_y (1/m) sum_i f_i(x, y) - h(y), if a closed form exists.
  virtual std::optional<Vector> exact_pooled_dual(const Vector& /*x*/) const {
    return std::nullopt;
  }

  virtual bool has_exact_dual() const { return false; }
  virtual bool has_exact_pooled_dual() const { return false; }
};

/// Mean of the agents' x-gradients: (1/m) sum_i grad_x f_i(x, y_i).
Vector mean_grad_x(const MinimaxProblem& problem, const Vector& x, const Matrix& y_rows);

}  // namespace dgdmax
