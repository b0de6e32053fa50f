#include "dgdmax/drlr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dgdmax/graph.hpp"
#include "dgdmax/random.hpp"
#include "dgdmax/simplex.hpp"

namespace dgdmax {

double logistic_loss(double margin) {
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

DrlrProblem::DrlrProblem(Dataset data, Partition parts, DrlrParams params)
    : data_(std::move(data)), parts_(std::move(parts)), params_(params) {
  if (!(params_.beta_y > 0.0)) throw std::invalid_argument("DRLR: beta_y must be positive");
  if (params_.beta_x < 0.0) throw std::invalid_argument("DRLR: beta_x must be nonnegative");
  if (parts_.empty()) throw std::invalid_argument("DRLR: need at least one agent");
  if (!is_disjoint_cover(parts_, data_.sample_count()))
    throw std::invalid_argument("DRLR: partition is not a disjoint cover of the samples");

  blocks_.reserve(parts_.size());
  for (const auto& part : parts_) {
    if (part.empty()) throw std::invalid_argument("DRLR: empty partition");
    Block block;
    block.ids = part;
    block.labels.resize(static_cast<Eigen::Index>(part.size()));
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < part.size(); ++r) {
      const int j = part[r];
      block.labels(static_cast<Eigen::Index>(r)) = data_.labels(j);
      for (SparseMatrix::InnerIterator it(data_.features, j); it; ++it)
        triplets.emplace_back(static_cast<int>(r), static_cast<int>(it.col()), it.value());
    }
    block.rows.resize(static_cast<Eigen::Index>(part.size()), data_.feature_dim());
    block.rows.setFromTriplets(triplets.begin(), triplets.end());
    block.rows.makeCompressed();
    blocks_.push_back(std::move(block));
  }
  lipschitz_ = estimate_lipschitz();
}

ProblemConstants DrlrProblem::constants() const {
  return ProblemConstants{lipschitz_.value, params_.beta_y, params_.beta_y};
}

void DrlrProblem::check_agent(int agent) const {
  if (agent < 0 || agent >= agents())
    throw std::out_of_range("DRLR: agent index " + std::to_string(agent) + " out of range");
}

Vector DrlrProblem::margins(const Block& block, const Vector& x) const {
  return block.labels.cwiseProduct(block.rows * x);
}

double DrlrProblem::v_x(const Vector& x) const {
  const double a = params_.alpha;
  return params_.beta_x * (a * x.array().square() / (1.0 + a * x.array().square())).sum();
}

Vector DrlrProblem::grad_v_x(const Vector& x) const {
  const double a = params_.alpha;
  const auto denom = (1.0 + a * x.array().square()).square();
  return (params_.beta_x * 2.0 * a * x.array() / denom).matrix();
}

Vector DrlrProblem::sample_losses(const Vector& x) const {
  if (x.size() != dim_x()) throw std::invalid_argument("DRLR: x has wrong dimension");
  const Vector z = data_.labels.cwiseProduct(data_.features * x);
  return z.unaryExpr([](double t) { return logistic_loss(t); });
}

double DrlrProblem::value(int agent, const Vector& x, const Vector& y) const {
  check_agent(agent);
  if (x.size() != dim_x() || y.size() != dim_y())
    throw std::invalid_argument("DRLR: dimension mismatch in value");
  const Block& block = blocks_[agent];
  const Vector z = margins(block, x);
  const double m = agents();
  double weighted = 0.0;
  for (Eigen::Index r = 0; r < z.size(); ++r) weighted += y(block.ids[r]) * logistic_loss(z(r));
  const double n_inv = 1.0 / dim_y();
  const double v_y = 0.5 * params_.beta_y * (y.array() - n_inv).matrix().squaredNorm();
  return m * weighted + v_x(x) - v_y;
}

Vector DrlrProblem::grad_x(int agent, const Vector& x, const Vector& y) const {
  check_agent(agent);
  if (x.size() != dim_x() || y.size() != dim_y())
    throw std::invalid_argument("DRLR: dimension mismatch in grad_x");
  const Block& block = blocks_[agent];
  const Vector z = margins(block, x);
  Vector coef(z.size());
  for (Eigen::Index r = 0; r < z.size(); ++r)
    coef(r) = -block.labels(r) * sigmoid(-z(r)) * y(block.ids[r]);
  const double m = agents();
  return m * (block.rows.transpose() * coef) + grad_v_x(x);
}

Vector DrlrProblem::grad_y(int agent, const Vector& x, const Vector& y) const {
  check_agent(agent);
  if (x.size() != dim_x() || y.size() != dim_y())
    throw std::invalid_argument("DRLR: dimension mismatch in grad_y");
  const Block& block = blocks_[agent];
  const Vector z = margins(block, x);
  const double m = agents();
  const double n_inv = 1.0 / dim_y();
  Vector g = -params_.beta_y * (y.array() - n_inv).matrix();
  for (Eigen::Index r = 0; r < z.size(); ++r) g(block.ids[r]) += m * logistic_loss(z(r));
  return g;
}

Vector DrlrProblem::prox_h(const Vector& z, double /*step*/) const { return project_simplex(z); }

std::optional<Vector> DrlrProblem::exact_dual(int agent, const Vector& x,
                                              const Vector& lambda_tilde, double L) const {
  check_agent(agent);
  if (x.size() != dim_x() || lambda_tilde.size() != dim_y())
    throw std::invalid_argument("DRLR: dimension mismatch in exact_dual");
  const Block& block = blocks_[agent];
  const Vector z = margins(block, x);
  const double m = agents();
  const double coupling = L * std::sqrt(m) / 2.0;
  Vector c = -coupling * lambda_tilde;
  for (Eigen::Index r = 0; r < z.size(); ++r) c(block.ids[r]) += m * logistic_loss(z(r));
  const double n_inv = 1.0 / dim_y();
  return project_simplex((n_inv + c.array() / params_.beta_y).matrix());
}

std::optional<Vector> DrlrProblem::exact_pooled_dual(const Vector& x) const {
  const double n_inv = 1.0 / dim_y();
  return project_simplex((n_inv + sample_losses(x).array() / params_.beta_y).matrix());
}

Vector DrlrProblem::hessian_apply(int agent, const Vector& x, const Vector& y, const Vector& u,
                                  const Vector& w) const {
  check_agent(agent);
  const Block& block = blocks_[agent];
  const Vector z = margins(block, x);
  const double m = agents();
  const double a = params_.alpha;
  const int n = dim_x();

  Vector curvature(z.size());  // y_j sigma'(z_j)
  Vector coef(z.size());       // c_j = -b_j sigma(-z_j)
  Vector w_local(z.size());
  for (Eigen::Index r = 0; r < z.size(); ++r) {
    const double s = sigmoid(z(r));
    curvature(r) = y(block.ids[r]) * s * (1.0 - s);
    coef(r) = -block.labels(r) * sigmoid(-z(r));
    w_local(r) = w(block.ids[r]);
  }
  const Vector au = block.rows * u;
  const Vector x2 = x.array().square();
  const Vector v_xx = (params_.beta_x * 2.0 * a * (1.0 - 3.0 * a * x2.array()) /
                       (1.0 + a * x2.array()).cube())
                          .matrix();

  Vector out(n + dim_y());
  out.head(n) = m * (block.rows.transpose() * curvature.cwiseProduct(au)) +
                v_xx.cwiseProduct(u) + m * (block.rows.transpose() * coef.cwiseProduct(w_local));
  out.tail(dim_y()) = -params_.beta_y * w;
  const Vector cross = m * coef.cwiseProduct(au);
  for (Eigen::Index r = 0; r < z.size(); ++r) out(n + block.ids[r]) += cross(r);
  return out;
}

// Analytic bound per agent from the block Hessian [[H_xx, H_xy], [H_yx, -beta_y I]]:
// ||H|| <= max(||H_xx||, beta_y) + ||H_xy||, with ||H_xx|| <= m max||a_j||^2 / 4 + 2 alpha beta_x
// on the simplex and ||H_xy|| <= m ||A_i||_2 since |c_j| <= 1. The sampled check runs power
// iteration on H^2 at random points (x in the radius-R ball, y on the simplex).
LipschitzEstimate DrlrProblem::estimate_lipschitz() const {
  LipschitzEstimate est;
  const double m = agents();
  const int n = dim_x();
  const int big_n = dim_y();
  for (const Block& block : blocks_) {
    double max_row_sq = 0.0;
    for (Eigen::Index r = 0; r < block.rows.rows(); ++r)
      max_row_sq = std::max(max_row_sq, block.rows.row(r).squaredNorm());
    const Matrix gram = Matrix(block.rows.transpose() * block.rows);
    const double a_norm = std::sqrt(std::max(0.0, largest_eigenvalue_psd(gram, 1e-12, 10000)));
    const double hxx = m * max_row_sq / 4.0 + 2.0 * params_.alpha * params_.beta_x;
    est.analytic = std::max(est.analytic, std::max(hxx, params_.beta_y) + m * a_norm);
  }

  SplitMix64 rng(params_.lipschitz_seed);
  for (int i = 0; i < agents(); ++i) {
    for (int s = 0; s < params_.lipschitz_samples; ++s) {
      Vector x(n);
      for (int k = 0; k < n; ++k) x(k) = rng.normal();
      const double radius = params_.lipschitz_radius * std::pow(rng.uniform(), 1.0 / n);
      if (x.norm() > 0) x *= radius / x.norm();
      Vector y(big_n);
      for (int j = 0; j < big_n; ++j) y(j) = -std::log(1.0 - rng.uniform());
      y /= y.sum();

      Vector v(n + big_n);
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.normal();
      v.normalize();
      double lambda = 0.0;
      for (int it = 0; it < 200; ++it) {
        const Vector hv = hessian_apply(i, x, y, v.head(n), v.tail(big_n));
        const Vector h2v = hessian_apply(i, x, y, hv.head(n), hv.tail(big_n));
        const double next = v.dot(h2v);
        const double norm = h2v.norm();
        if (norm == 0.0) break;
        v = h2v / norm;
        const bool done = std::abs(next - lambda) <= 1e-10 * next;
        lambda = next;
        if (done) break;
      }
      est.sampled = std::max(est.sampled, std::sqrt(std::max(lambda, 0.0)));
    }
  }
  est.value = params_.lipschitz_override ? *params_.lipschitz_override
                                         : std::max(est.analytic, est.sampled);
  return est;
}

}  // namespace dgdmax
