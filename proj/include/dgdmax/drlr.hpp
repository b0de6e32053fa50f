#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dgdmax/dataset.hpp"
#include "dgdmax/problem.hpp"

namespace dgdmax {

/// Logistic loss log(1 + exp(-t)) evaluated at the margin t = b a^T x.
double logistic_loss(double margin);
/// 1 / (1 + exp(-t)).
double sigmoid(double t);

struct DrlrParams {
  double alpha = 10.0;
  double beta_x = 1e-3;
  double beta_y = 0.1;
  double lipschitz_radius = 10.0;  // x-ball for the sampled Hessian check
  int lipschitz_samples = 16;      // sampled points per agent
  std::uint64_t lipschitz_seed = 0x4C495053ULL;
  std::optional<double> lipschitz_override;
};

struct LipschitzEstimate {
  double analytic = 0.0;
  double sampled = 0.0;
  double value = 0.0;  // max(analytic, sampled), or the override
};

/// Distributionally robust logistic regression split over m agents:
///
///   f_i(x, y) = m sum_{j in J_i} y_j l(x; a_j, b_j) + V_x(x) - V_y(y),
///   V_x(x) = beta_x sum_k alpha x_k^2 / (1 + alpha x_k^2),
///   V_y(y) = (beta_y / 2) ||y - 1/N||^2,   g = 0,   h = indicator of the simplex.
///
/// y-gradients are defined on all of R^N; h alone carries the constraint.
class DrlrProblem final : public MinimaxProblem {
 public:
  DrlrProblem(Dataset data, Partition parts, DrlrParams params);

  int agents() const override { return static_cast<int>(parts_.size()); }
  int dim_x() const override { return data_.feature_dim(); }
  int dim_y() const override { return data_.sample_count(); }
  ProblemConstants constants() const override;

  double value(int agent, const Vector& x, const Vector& y) const override;
  Vector grad_x(int agent, const Vector& x, const Vector& y) const override;
  Vector grad_y(int agent, const Vector& x, const Vector& y) const override;

  DualRegularizer dual_regularizer() const override { return DualRegularizer::Simplex; }
  Vector prox_h(const Vector& z, double step) const override;

  /// Proj_simplex(1/N + c / beta_y), c_j = m l_j(x) 1[j in J_i] - (L sqrt(m)/2) lambda_tilde_j.
  std::optional<Vector> exact_dual(int agent, const Vector& x, const Vector& lambda_tilde,
                                   double L) const override;
  /// Proj_simplex(1/N + l(x) / beta_y) over all samples.
  std::optional<Vector> exact_pooled_dual(const Vector& x) const override;
  bool has_exact_dual() const override { return true; }
  bool has_exact_pooled_dual() const override { return true; }

  double v_x(const Vector& x) const;
  Vector grad_v_x(const Vector& x) const;
  /// Per-sample losses l(x; a_j, b_j), j = 0..N-1.
  Vector sample_losses(const Vector& x) const;

  /// Hessian-vector product of f_i at (x, y) applied to (u, w).
  Vector hessian_apply(int agent, const Vector& x, const Vector& y, const Vector& u,
                       const Vector& w) const;

  const LipschitzEstimate& lipschitz() const { return lipschitz_; }
  const Dataset& data() const { return data_; }
  const Partition& partition() const { return parts_; }
  const DrlrParams& params() const { return params_; }

 private:
  struct Block {
    SparseMatrix rows;     // a_j^T for j in J_i
    Vector labels;         // b_j for j in J_i
    std::vector<int> ids;  // global sample indices
  };

  Vector margins(const Block& block, const Vector& x) const;
  LipschitzEstimate estimate_lipschitz() const;
  void check_agent(int agent) const;

  Dataset data_;
  Partition parts_;
  DrlrParams params_;
  std::vector<Block> blocks_;
  LipschitzEstimate lipschitz_;
};

}  // namespace dgdmax
