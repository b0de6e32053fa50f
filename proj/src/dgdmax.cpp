#include "dgdmax/dgdmax.hpp"

#include <cmath>

#include "dgdmax/subsolver.hpp"

namespace dgdmax {

DecentralizedGdmax::DecentralizedGdmax(const MinimaxProblem& problem, const MixingMatrix& mixing,
                                       Schedule schedule, DgdmaxOptions options)
    : problem_(problem), mixing_(mixing), schedule_(std::move(schedule)), options_(options),
      L_(problem.constants().L), exact_(schedule_.use_exact_dual && problem.has_exact_dual()) {
  if (mixing_.size() != problem_.agents())
    throw std::invalid_argument("D-GDMax: mixing matrix size does not match the agent count");
  if (!(schedule_.eta_x > 0.0) || !(schedule_.eta_lambda > 0.0))
    throw std::invalid_argument("D-GDMax: stepsizes must be positive");
  if (!schedule_.delta) throw std::invalid_argument("D-GDMax: missing delta schedule");
}

DecentralizedGdmax::DualSolve DecentralizedGdmax::solve_dual(long round, int agent,
                                                             const Vector& x,
                                                             const Vector& lambda_tilde,
                                                             const Vector& warm,
                                                             double delta) const {
  if (exact_) return {*problem_.exact_dual(agent, x, lambda_tilde, L_), 0};
  if (!(delta > 0.0))
    throw std::invalid_argument("D-GDMax: delta_t = 0 requires an exact dual oracle");
  const DualSubproblem sub = make_dual_subproblem(problem_, agent, x, lambda_tilde, L_);
  SubsolveResult res = apg_maximize(sub, warm, delta, options_.apg_max_iters);
  if (!res.converged) throw SubsolverBudgetError(round, agent, res.certified_residual, delta);
  return {std::move(res.y), res.iterations_used};
}

void DecentralizedGdmax::check_finite(long round, const NetworkState& s) const {
  const double limit = options_.divergence_limit;
  auto bad = [limit](const Matrix& a) {
    if (!a.allFinite()) return true;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a.row(i).norm() > limit) return true;
    return false;
  };
  if (bad(s.X) || bad(s.Y) || bad(s.Lambda) || bad(s.V))
    throw DivergenceError(round, "iterate is non-finite or exceeds the divergence limit");
}

NetworkState DecentralizedGdmax::init(const Vector& x0) const {
  const int m = problem_.agents();
  const int n1 = problem_.dim_x();
  const int n2 = problem_.dim_y();
  if (x0.size() != n1) throw std::invalid_argument("D-GDMax: x0 has wrong dimension");

  NetworkState s;
  s.t = 0;
  s.X = x0.transpose().replicate(m, 1);
  s.Lambda = Matrix::Zero(m, n2);
  s.LambdaTilde = Matrix::Zero(m, n2);
  s.Y.resize(m, n2);
  s.GradX.resize(m, n1);
  s.delta = exact_ ? 0.0 : schedule_.delta(0);

  // APG warm start at y = 0 mapped into dom(h).
  const Vector warm = problem_.prox_h(Vector::Zero(n2), 1.0);
  std::vector<int> iters(m, 0);
  for_each_agent(m, options_.workers, [&](int i) {
    const Vector lt = s.LambdaTilde.row(i).transpose();
    DualSolve solved = solve_dual(0, i, x0, lt, warm, s.delta);
    s.Y.row(i) = solved.y.transpose();
    s.GradX.row(i) = problem_.grad_x(i, x0, solved.y).transpose();
    iters[i] = solved.iterations;
  });
  for (const int k : iters) s.subsolver_iters += k;
  s.V = s.GradX;
  check_finite(0, s);
  return s;
}

NetworkState DecentralizedGdmax::step(const NetworkState& cur) const {
  const int m = problem_.agents();
  const Matrix& w = mixing_.weights;
  const double eta_x = schedule_.eta_x;

  NetworkState next;
  next.t = cur.t + 1;

  const Matrix x_mixed = w * cur.X;
  next.X.resize(cur.X.rows(), cur.X.cols());
  for_each_agent(m, options_.workers, [&](int i) {
    const Vector z = (x_mixed.row(i) - eta_x * cur.V.row(i)).transpose();
    next.X.row(i) = problem_.prox_g(z, eta_x).transpose();
  });

  const double lambda_rate = L_ * schedule_.eta_lambda / (2.0 * std::sqrt(static_cast<double>(m)));
  next.Lambda = cur.Lambda + lambda_rate * (w * cur.Y - cur.Y);
  next.LambdaTilde = w.transpose() * next.Lambda - next.Lambda;

  next.delta = exact_ ? 0.0 : schedule_.delta(next.t);
  next.Y.resize(cur.Y.rows(), cur.Y.cols());
  next.GradX.resize(cur.GradX.rows(), cur.GradX.cols());
  std::vector<int> iters(m, 0);
  for_each_agent(m, options_.workers, [&](int i) {
    const Vector x = next.X.row(i).transpose();
    const Vector lt = next.LambdaTilde.row(i).transpose();
    const Vector warm = cur.Y.row(i).transpose();
    DualSolve solved = solve_dual(next.t, i, x, lt, warm, next.delta);
    next.Y.row(i) = solved.y.transpose();
    next.GradX.row(i) = problem_.grad_x(i, x, solved.y).transpose();
    iters[i] = solved.iterations;
  });
  for (const int k : iters) next.subsolver_iters += k;

  next.V = w * cur.V + next.GradX - cur.GradX;
  check_finite(next.t, next);
  return next;
}

}  // namespace dgdmax
