#pragma once

#include <functional>
#include <vector>

#include "dgdmax/problem.hpp"

namespace dgdmax {

/// Called with (t, x_t, y_t, prox-gradient norm of p + g at x_t); return false to stop.
using CentralizedObserver =
    std::function<bool(long t, const Vector& x, const Vector& y, double prox_grad)>;

struct CentralizedResult {
  std::vector<double> prox_grad;  // one entry per recorded iterate t = 0, 1, ...
  Vector x;
  Vector y;
  bool diverged = false;
  long diverged_at = -1;
};

struct CentralizedOptions {
  double divergence_limit = 1e8;
};

/// One gradient-descent-maximization step on the pooled problem:
/// y*(x) = argmax_y f(x, y) - h(y), x+ = prox_{eta g}(x - eta grad_x f(x, y*)).
/// With a single agent this is exactly one round of the decentralized method.
Vector gdmax_step(const MinimaxProblem& problem, const Vector& x, double eta_x);

/// GDMax for `rounds` recorded iterates (rounds - 1 steps).
CentralizedResult gdmax_run(const MinimaxProblem& problem, const Vector& x0, double eta_x,
                            long rounds, const CentralizedObserver& observer = {},
                            CentralizedOptions options = {});

struct GdaState {
  Vector x;
  Vector y;
  double eta_x = 0.0;
  double eta_y = 0.0;
};

/// Simultaneous gradient descent ascent from the round-t pair:
/// x+ = prox_{eta_x g}(x - eta_x grad_x f), y+ = prox_{eta_y h}(y + eta_y grad_y f).
GdaState gda_step(const MinimaxProblem& problem, const GdaState& state);

CentralizedResult gda_run(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                          double eta_x, double eta_y, long rounds,
                          const CentralizedObserver& observer = {},
                          CentralizedOptions options = {});

}  // namespace dgdmax
