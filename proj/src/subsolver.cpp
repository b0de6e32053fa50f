#include "dgdmax/subsolver.hpp"

#include <cmath>
#include <limits>

namespace dgdmax {

DualSubproblem make_dual_subproblem(const MinimaxProblem& problem, int agent, const Vector& x,
                                    const Vector& lambda_tilde, double L) {
  const double coupling = L * std::sqrt(static_cast<double>(problem.agents())) / 2.0;
  const ProblemConstants k = problem.constants();
  DualSubproblem sub;
  sub.mu = k.mu;
  sub.L_y = k.L_y;
  sub.smooth_grad = [&problem, agent, x, lambda_tilde, coupling](const Vector& y) {
    return Vector(problem.grad_y(agent, x, y) - coupling * lambda_tilde);
  };
  sub.smooth_value = [&problem, agent, x, lambda_tilde, coupling](const Vector& y) {
    return problem.value(agent, x, y) - coupling * lambda_tilde.dot(y);
  };
  sub.prox_h = [&problem](const Vector& z, double step) { return problem.prox_h(z, step); };
  return sub;
}

SubsolveResult apg_maximize(const DualSubproblem& sub, const Vector& y0, double delta,
                            int max_iters) {
  if (!(sub.L_y >= sub.mu && sub.mu > 0.0))
    throw std::invalid_argument("apg_maximize: need L_y >= mu > 0");
  if (delta < 0.0) throw std::invalid_argument("apg_maximize: delta must be nonnegative");
  if (max_iters < 1) throw std::invalid_argument("apg_maximize: max_iters must be >= 1");

  const double step = 1.0 / sub.L_y;
  const double q = std::sqrt(sub.mu / sub.L_y);
  const double momentum = (1.0 - q) / (1.0 + q);

  SubsolveResult best;
  best.certified_residual = std::numeric_limits<double>::infinity();

  Vector z = y0;
  Vector y_prev = y0;
  Vector grad_z = sub.smooth_grad(z);
  for (int k = 1; k <= max_iters; ++k) {
    if (!grad_z.allFinite()) throw SubsolverError("apg_maximize: non-finite gradient");
    const Vector y_next = sub.prox_h(z + step * grad_z, step);
    const Vector grad_next = sub.smooth_grad(y_next);
    if (!grad_next.allFinite()) throw SubsolverError("apg_maximize: non-finite gradient");
    const double residual = (sub.L_y * (z - y_next) - (grad_next - grad_z)).norm();
    if (residual < best.certified_residual) {
      best.y = y_next;
      best.certified_residual = residual;
    }
    best.iterations_used = k;
    if (residual <= delta) {
      best.y = y_next;
      best.certified_residual = residual;
      best.converged = true;
      return best;
    }
    z = y_next + momentum * (y_next - y_prev);
    y_prev = y_next;
    grad_z = sub.smooth_grad(z);
  }
  return best;
}

long theoretical_budget_s_t(double L_y, double kappa_y, double gap, double delta_t) {
  if (!(delta_t > 0.0)) throw std::invalid_argument("theoretical_budget_s_t: delta_t must be > 0");
  if (!(gap > 0.0)) throw std::invalid_argument("theoretical_budget_s_t: gap must be > 0");
  if (!(L_y > 0.0) || !(kappa_y > 0.0))
    throw std::invalid_argument("theoretical_budget_s_t: L_y and kappa_y must be > 0");
  const double raw = std::ceil(std::sqrt(kappa_y) * std::log(16.0 * L_y * gap / (delta_t * delta_t)));
  return raw > 0.0 ? static_cast<long>(raw) : 0L;
}

}  // namespace dgdmax
