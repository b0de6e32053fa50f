#include "dgdmax/quadratic.hpp"

#include <cmath>
#include <stdexcept>

#include "dgdmax/random.hpp"

namespace dgdmax {

QuadraticProblem::QuadraticProblem(std::vector<Matrix> a, Matrix b, std::vector<Vector> c,
                                   std::vector<Vector> d, double mu, double l1_weight)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), mu_(mu),
      l1_(l1_weight) {
  if (a_.empty() || a_.size() != c_.size() || a_.size() != d_.size())
    throw std::invalid_argument("QuadraticProblem: inconsistent agent count");
  if (!(mu_ > 0.0)) throw std::invalid_argument("QuadraticProblem: mu must be positive");
  const int n1 = dim_x();
  const int n2 = dim_y();
  double L = mu_;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (a_[i].rows() != n1 || a_[i].cols() != n1 || c_[i].size() != n1 || d_[i].size() != n2)
      throw std::invalid_argument("QuadraticProblem: dimension mismatch");
    Matrix h(n1 + n2, n1 + n2);
    h << a_[i], b_, b_.transpose(), -mu_ * Matrix::Identity(n2, n2);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
    L = std::max(L, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  constants_ = ProblemConstants{L, mu_, mu_};
}

double QuadraticProblem::value(int i, const Vector& x, const Vector& y) const {
  return 0.5 * x.dot(a_[i] * x) + x.dot(b_ * y) + c_[i].dot(x) + d_[i].dot(y) -
         0.5 * mu_ * y.squaredNorm();
}

Vector QuadraticProblem::grad_x(int i, const Vector& x, const Vector& y) const {
  return a_[i] * x + b_ * y + c_[i];
}

Vector QuadraticProblem::grad_y(int i, const Vector& x, const Vector& y) const {
  return b_.transpose() * x + d_[i] - mu_ * y;
}

Vector QuadraticProblem::prox_g(const Vector& z, double eta) const {
  if (l1_ == 0.0) return z;
  const double t = eta * l1_;
  return z.unaryExpr([t](double v) { return std::copysign(std::max(std::abs(v) - t, 0.0), v); });
}

std::optional<Vector> QuadraticProblem::exact_dual(int i, const Vector& x,
                                                   const Vector& lambda_tilde, double L) const {
  const double coupling = L * std::sqrt(static_cast<double>(agents())) / 2.0;
  return Vector((b_.transpose() * x + d_[i] - coupling * lambda_tilde) / mu_);
}

std::optional<Vector> QuadraticProblem::exact_pooled_dual(const Vector& x) const {
  Vector d_mean = Vector::Zero(dim_y());
  for (const auto& d : d_) d_mean += d;
  d_mean /= static_cast<double>(agents());
  return Vector((b_.transpose() * x + d_mean) / mu_);
}

Vector QuadraticProblem::primal_minimizer() const {
  const int n1 = dim_x();
  Matrix a_mean = Matrix::Zero(n1, n1);
  Vector c_mean = Vector::Zero(n1);
  Vector d_mean = Vector::Zero(dim_y());
  for (int i = 0; i < agents(); ++i) {
    a_mean += a_[i];
    c_mean += c_[i];
    d_mean += d_[i];
  }
  a_mean /= agents();
  c_mean /= agents();
  d_mean /= agents();
  const Matrix hess = a_mean + b_ * b_.transpose() / mu_;
  return hess.ldlt().solve(-(c_mean + b_ * d_mean / mu_));
}

QuadraticProblem make_random_quadratic(int agents, int dim_x, int dim_y, double mu,
                                       std::uint64_t seed, double l1_weight) {
  SplitMix64 rng(seed);
  auto gaussian = [&rng](int r, int c) {
    Matrix out(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) out(i, j) = rng.normal();
    return out;
  };
  const Matrix b = gaussian(dim_x, dim_y) / std::sqrt(static_cast<double>(dim_y));
  // Shift the common part so the averaged primal Hessian is positive definite.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b * b.transpose() / mu);
  const double floor = eig.eigenvalues().minCoeff();
  std::vector<Matrix> a;
  std::vector<Vector> c;
  std::vector<Vector> d;
  for (int i = 0; i < agents; ++i) {
    Matrix s = gaussian(dim_x, dim_x) * 0.3;
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    const double shift = std::max(0.0, -(floor + es.eigenvalues().minCoeff()) + 0.5);
    a.push_back(s + shift * Matrix::Identity(dim_x, dim_x) -
                0.25 * floor * Matrix::Identity(dim_x, dim_x));
    c.push_back(gaussian(dim_x, 1));
    d.push_back(gaussian(dim_y, 1));
  }
  return QuadraticProblem(std::move(a), b, std::move(c), std::move(d), mu, l1_weight);
}

}  // namespace dgdmax
