#include "dgdmax/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dgdmax {

double prox_grad_mapping(const MinimaxProblem& problem, const Vector& x, double eta,
                         const Vector& grad) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox_grad_mapping: eta must be positive");
  return (x - problem.prox_g(x - eta * grad, eta)).norm() / eta;
}

Vector pooled_argmax(const MinimaxProblem& problem, const Vector& x) {
  auto y = problem.exact_pooled_dual(x);
  if (!y) throw std::invalid_argument("problem has no pooled dual oracle");
  return std::move(*y);
}

Vector grad_p(const MinimaxProblem& problem, const Vector& x) {
  const Vector y = pooled_argmax(problem, x);
  return mean_grad_x(problem, x, y.transpose().replicate(problem.agents(), 1));
}

Matrix dual_argmax(const MinimaxProblem& problem, const MixingMatrix& w, const Matrix& x,
                   const Matrix& lambda) {
  const int m = problem.agents();
  const double L = problem.constants().L;
  const Matrix lambda_tilde = w.weights.transpose() * lambda - lambda;
  Matrix y(m, problem.dim_y());
  for (int i = 0; i < m; ++i) {
    auto yi = problem.exact_dual(i, x.row(i).transpose(), lambda_tilde.row(i).transpose(), L);
    if (!yi) throw std::invalid_argument("problem has no exact dual oracle");
    y.row(i) = yi->transpose();
  }
  return y;
}

Matrix consensus_dual_argmax(const MinimaxProblem& problem, const MixingMatrix& w,
                             const Vector& x, const Matrix& lambda) {
  return dual_argmax(problem, w, x.transpose().replicate(problem.agents(), 1), lambda);
}

Vector grad_P_x(const MinimaxProblem& problem, const Vector& x, const Matrix& y_hat) {
  return mean_grad_x(problem, x, y_hat);
}

Matrix grad_P_lambda(const MinimaxProblem& problem, const MixingMatrix& w, const Matrix& y_hat) {
  const double m = problem.agents();
  const double L = problem.constants().L;
  return -(L / (2.0 * std::sqrt(m))) * (w.weights * y_hat - y_hat);
}

LambdaGrad lambda_grad(const MinimaxProblem& problem, const MixingMatrix& w, const Vector& x_avg,
                       const Matrix& lambda, const Matrix& y_current, bool exact) {
  if (exact) {
    const Matrix y_hat = consensus_dual_argmax(problem, w, x_avg, lambda);
    return {grad_P_lambda(problem, w, y_hat).norm(), false};
  }
  return {grad_P_lambda(problem, w, y_current).norm(), true};
}

double tracking_residual(const Matrix& v, const MinimaxProblem& problem, const Matrix& x,
                         const Matrix& y) {
  const int m = problem.agents();
  if (v.rows() != m || x.rows() != m || y.rows() != m)
    throw std::invalid_argument("tracking_residual: dimension mismatch");
  Vector grad_sum = Vector::Zero(problem.dim_x());
  for (int i = 0; i < m; ++i)
    grad_sum += problem.grad_x(i, x.row(i).transpose(), y.row(i).transpose());
  const Vector v_mean = v.colwise().mean().transpose();
  return (v_mean - grad_sum / static_cast<double>(m)).norm();
}

StationarityReport stationarity_report(const MinimaxProblem& problem, const MixingMatrix& w,
                                       const NetworkState& state, double eta) {
  const int m = problem.agents();
  const double L = problem.constants().L;
  const Vector x_avg = state.X.colwise().mean().transpose();
  const auto [x_mean, x_perp] = deviation(state.X);
  const double perp = x_perp.norm();

  StationarityReport r;
  r.consensus_x_raw = perp / std::sqrt(static_cast<double>(m));
  r.consensus_x = L * r.consensus_x_raw;
  r.tracking_residual = tracking_residual(state.V, problem, state.X, state.Y);

  const bool exact = problem.has_exact_dual();
  const Matrix y_hat = exact ? consensus_dual_argmax(problem, w, x_avg, state.Lambda) : state.Y;
  r.prox_grad_norm_P = prox_grad_mapping(problem, x_avg, eta, grad_P_x(problem, x_avg, y_hat));
  r.lambda_grad_norm = grad_P_lambda(problem, w, y_hat).norm();
  r.lambda_grad_is_surrogate = !exact;

  if (problem.has_exact_pooled_dual())
    r.prox_grad_norm_p = prox_grad_mapping(problem, x_avg, eta, grad_p(problem, x_avg));
  return r;
}

}  // namespace dgdmax
