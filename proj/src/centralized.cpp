#include "dgdmax/centralized.hpp"

#include <stdexcept>

#include "dgdmax/metrics.hpp"

namespace dgdmax {

namespace {

Vector mean_grad_y(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  Vector sum = Vector::Zero(problem.dim_y());
  for (int i = 0; i < problem.agents(); ++i) sum += problem.grad_y(i, x, y);
  return sum / static_cast<double>(problem.agents());
}

Vector pooled_grad_x(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  return mean_grad_x(problem, x, y.transpose().replicate(problem.agents(), 1));
}

bool out_of_bounds(const Vector& v, double limit) { return !v.allFinite() || v.norm() > limit; }

}  // namespace

Vector gdmax_step(const MinimaxProblem& problem, const Vector& x, double eta_x) {
  const Vector y = pooled_argmax(problem, x);
  return problem.prox_g(x - eta_x * pooled_grad_x(problem, x, y), eta_x);
}

CentralizedResult gdmax_run(const MinimaxProblem& problem, const Vector& x0, double eta_x,
                            long rounds, const CentralizedObserver& observer,
                            CentralizedOptions options) {
  if (!(eta_x > 0.0)) throw std::invalid_argument("gdmax_run: eta_x must be positive");
  if (rounds < 1) throw std::invalid_argument("gdmax_run: need at least one round");
  CentralizedResult res;
  Vector x = x0;
  for (long t = 0; t < rounds; ++t) {
    const Vector y = pooled_argmax(problem, x);
    const Vector g = pooled_grad_x(problem, x, y);
    const double pg = prox_grad_mapping(problem, x, eta_x, g);
    res.prox_grad.push_back(pg);
    res.x = x;
    res.y = y;
    if (observer && !observer(t, x, y, pg)) break;
    if (t + 1 == rounds) break;
    x = problem.prox_g(x - eta_x * g, eta_x);
    if (out_of_bounds(x, options.divergence_limit)) {
      res.diverged = true;
      res.diverged_at = t + 1;
      res.x = x;
      break;
    }
  }
  return res;
}

GdaState gda_step(const MinimaxProblem& problem, const GdaState& s) {
  GdaState next = s;
  next.x = problem.prox_g(s.x - s.eta_x * pooled_grad_x(problem, s.x, s.y), s.eta_x);
  next.y = problem.prox_h(s.y + s.eta_y * mean_grad_y(problem, s.x, s.y), s.eta_y);
  return next;
}

CentralizedResult gda_run(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                          double eta_x, double eta_y, long rounds,
                          const CentralizedObserver& observer, CentralizedOptions options) {
  if (!(eta_x > 0.0) || !(eta_y > 0.0))
    throw std::invalid_argument("gda_run: stepsizes must be positive");
  if (rounds < 1) throw std::invalid_argument("gda_run: need at least one round");
  CentralizedResult res;
  GdaState s{x0, y0, eta_x, eta_y};
  for (long t = 0; t < rounds; ++t) {
    // The reported measure is the primal one, evaluated at the exact inner maximizer.
    const double pg = prox_grad_mapping(problem, s.x, eta_x, grad_p(problem, s.x));
    res.prox_grad.push_back(pg);
    res.x = s.x;
    res.y = s.y;
    if (observer && !observer(t, s.x, s.y, pg)) break;
    if (t + 1 == rounds) break;
    s = gda_step(problem, s);
    if (out_of_bounds(s.x, options.divergence_limit) || out_of_bounds(s.y, options.divergence_limit)) {
      res.diverged = true;
      res.diverged_at = t + 1;
      res.x = s.x;
      res.y = s.y;
      break;
    }
  }
  return res;
}

}  // namespace dgdmax
