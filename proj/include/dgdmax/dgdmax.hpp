#pragma once

#include <stdexcept>
#include <string>

#include "dgdmax/graph.hpp"
#include "dgdmax/problem.hpp"
#include "dgdmax/schedule.hpp"

namespace dgdmax {

/// Round-t iterates of all agents; row i belongs to agent i.
struct NetworkState {
  long t = 0;
  Matrix X;            // m x n1
  Matrix Y;            // m x n2
  Matrix Lambda;       // m x n2
  Matrix LambdaTilde;  // W^T Lambda - Lambda
  Matrix V;            // m x n1 gradient trackers
  Matrix GradX;        // rows grad_x f_i(x_i, y_i), reused by the next tracking update
  double delta = 0.0;  // tolerance the current Y was solved to
  long subsolver_iters = 0;  // APG iterations spent producing the current Y (all agents)
};

struct DgdmaxOptions {
  int workers = 1;
  int apg_max_iters = 100000;
  double divergence_limit = 1e8;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(long round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round(round) {}
  long round;
};

struct SubsolverBudgetError : std::runtime_error {
  SubsolverBudgetError(long round, int agent, double residual, double delta)
      : std::runtime_error("round " + std::to_string(round) + ", agent " + std::to_string(agent) +
                           ": dual subsolver budget exhausted (residual " +
                           std::to_string(residual) + " > delta " + std::to_string(delta) + ")"),
        round(round), agent(agent) {}
  long round;
  int agent;
};

/// Decentralized gradient descent maximization over a simulated synchronous
/// network. One call to step() is one communication round:
///
///   X+ = prox_{eta_x g}(W X - eta_x V)
///   Lambda+ = Lambda + (L eta_lambda / (2 sqrt m)) (W - I) Y,   LambdaTilde+ = W^T Lambda+ - Lambda+
///   y_i+ ~ argmax d_i (to delta_{t+1}, warm-started at y_i)
///   V+ = W V + grad_x F(X+, Y+) - grad_x F(X, Y)
///
/// Per-agent work may be spread over `workers` threads; results are written
/// by agent index, so the output does not depend on the worker count.
class DecentralizedGdmax {
 public:
  DecentralizedGdmax(const MinimaxProblem& problem, const MixingMatrix& mixing, Schedule schedule,
                     DgdmaxOptions options = {});

  NetworkState init(const Vector& x0) const;
  NetworkState step(const NetworkState& state) const;

  const Schedule& schedule() const { return schedule_; }
  double lipschitz() const { return L_; }

 private:
  struct DualSolve {
    Vector y;
    int iterations = 0;
  };
  DualSolve solve_dual(long round, int agent, const Vector& x, const Vector& lambda_tilde,
                       const Vector& warm, double delta) const;
  void check_finite(long round, const NetworkState& s) const;

  const MinimaxProblem& problem_;
  const MixingMatrix& mixing_;
  Schedule schedule_;
  DgdmaxOptions options_;
  double L_;
  bool exact_;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads. The first
/// exception by agent index is rethrown after all workers finish.
template <typename Body>
void for_each_agent(int count, int workers, Body&& body);

}  // namespace dgdmax

#include "dgdmax/detail/parallel.hpp"
