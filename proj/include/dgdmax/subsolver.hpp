#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "dgdmax/problem.hpp"

namespace dgdmax {

/// max_y s(y) - h(y) with s smooth and mu-strongly concave (L_y-smooth).
struct DualSubproblem {
  std::function<Vector(const Vector&)> smooth_grad;          // grad s
  std::function<Vector(const Vector&, double)> prox_h;       // prox_{step h}
  std::function<double(const Vector&)> smooth_value;         // optional s, for gap reporting
  double mu = 1.0;
  double L_y = 1.0;
};

struct SubsolveResult {
  Vector y;
  double certified_residual = 0.0;  // bound on dist(0, -partial d(y))
  int iterations_used = 0;
  bool converged = false;
  std::optional<long> budget_s_t;
};

struct SubsolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Local dual objective d_i(y) = f_i(x, y) - h(y) - (L sqrt(m)/2) <lambda_tilde, y>.
DualSubproblem make_dual_subproblem(const MinimaxProblem& problem, int agent, const Vector& x,
                                    const Vector& lambda_tilde, double L);

/// Non-adaptive accelerated proximal gradient on -d with step 1/L_y and
/// momentum (1 - sqrt(mu/L_y)) / (1 + sqrt(mu/L_y)).
///
/// After each prox step y+ = prox_{h/L_y}(z + grad s(z)/L_y) taken from the
/// extrapolated point z, the vector
///     xi = L_y (z - y+) - (grad s(y+) - grad s(z))
/// lies in the subdifferential of -d at y+. The first iterate with
/// ||xi|| <= delta is returned. When the budget runs out the iterate with the
/// smallest certificate is returned with converged = false.
SubsolveResult apg_maximize(const DualSubproblem& sub, const Vector& y0, double delta,
                            int max_iters);

/// ceil(sqrt(kappa_y) ln(16 L_y gap / delta_t^2)), clamped below at 0. Reporting only.
long theoretical_budget_s_t(double L_y, double kappa_y, double gap, double delta_t);

}  // namespace dgdmax
