#pragma once

#include <optional>
#include <utility>

#include "dgdmax/dgdmax.hpp"
#include "dgdmax/graph.hpp"
#include "dgdmax/problem.hpp"

namespace dgdmax {

/// (X_avg, X_perp) with X_avg = 1 x_avg^T and X_perp = X - X_avg.
template <typename Derived>
std::pair<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>,
          Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>
deviation(const Eigen::MatrixBase<Derived>& x) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat avg = x.colwise().mean().replicate(x.rows(), 1);
  Mat perp = x - avg;
  return {std::move(avg), std::move(perp)};
}

/// (1/eta) ||x - prox_{eta g}(x - eta grad)||.
double prox_grad_mapping(const MinimaxProblem& problem, const Vector& x, double eta,
                         const Vector& grad);

/// argmax_y (1/m) sum_i f_i(x, y) - h(y). Throws if the problem has no pooled oracle.
Vector pooled_argmax(const MinimaxProblem& problem, const Vector& x);

/// grad p(x) = (1/m) sum_i grad_x f_i(x, y*(x)) (Danskin).
Vector grad_p(const MinimaxProblem& problem, const Vector& x);

/// S_Phi(X, Lambda): row i maximizes d_i at x_i with LambdaTilde = W^T Lambda - Lambda.
Matrix dual_argmax(const MinimaxProblem& problem, const MixingMatrix& w, const Matrix& x,
                   const Matrix& lambda);

/// S_Phi(1 x^T, Lambda): row i maximizes d_i at x with LambdaTilde = W^T Lambda - Lambda.
Matrix consensus_dual_argmax(const MinimaxProblem& problem, const MixingMatrix& w,
                             const Vector& x, const Matrix& lambda);

/// (grad_x P, grad_Lambda P) at (x, Lambda) given the maximizer rows y_hat.
Vector grad_P_x(const MinimaxProblem& problem, const Vector& x, const Matrix& y_hat);
Matrix grad_P_lambda(const MinimaxProblem& problem, const MixingMatrix& w, const Matrix& y_hat);

struct LambdaGrad {
  double value = 0.0;
  bool surrogate = false;
};

/// ||grad_Lambda P(x_avg, Lambda)||_F = (L / (2 sqrt m)) ||(W - I) Y_hat||_F.
/// exact = true evaluates Y_hat with the dual oracle; otherwise the current Y
/// stands in for it and the result is flagged.
LambdaGrad lambda_grad(const MinimaxProblem& problem, const MixingMatrix& w, const Vector& x_avg,
                       const Matrix& lambda, const Matrix& y_current, bool exact);

/// ||(1/m) 1^T V - (1/m) sum_i grad_x f_i(x_i, y_i)||_2.
double tracking_residual(const Matrix& v, const MinimaxProblem& problem, const Matrix& x,
                         const Matrix& y);

struct StationarityReport {
  double prox_grad_norm_P = 0.0;
  std::optional<double> prox_grad_norm_p;
  double consensus_x = 0.0;      // (L / sqrt m) ||X_perp||_F
  double consensus_x_raw = 0.0;  // ||X_perp||_F / sqrt m
  double lambda_grad_norm = 0.0;
  bool lambda_grad_is_surrogate = false;
  double tracking_residual = 0.0;
};

/// All stationarity measures at a network state. The exact dual oracle is used
/// when the problem has one; otherwise the current Y serves as surrogate.
StationarityReport stationarity_report(const MinimaxProblem& problem, const MixingMatrix& w,
                                       const NetworkState& state, double eta);

}  // namespace dgdmax
