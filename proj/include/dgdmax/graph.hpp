#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgdmax/random.hpp"
#include "dgdmax/types.hpp"

namespace dgdmax {

/// Undirected simple graph on nodes 0..node_count-1. Edges are stored as
/// (i, j) with i < j, sorted and unique.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, std::vector<std::pair<int, int>> edges);

  int node_count() const { return node_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(int i, int j) const;
  bool is_connected() const;
  std::vector<int> degrees() const;

  /// L = D - A.
  Matrix laplacian() const;

 private:
  int node_count_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

struct GraphGenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Erdős–Rényi G(m, p), redrawn from the same SplitMix64 stream until the
/// sample is connected. Pairs (i, j), i < j, are visited in lexicographic
/// order and kept when uniform() < p.
Graph gen_erdos_renyi(int nodes, double edge_prob, std::uint64_t seed,
                      int max_attempts = 1000);
Graph ring_graph(int nodes);
Graph path_graph(int nodes);
Graph complete_graph(int nodes);

struct MixingMatrix {
  Matrix weights;
  double rho = 0.0;                // ||W - 11^T/m||_2
  double op_norm_w_minus_i = 0.0;  // ||W - I||_2

  int size() const { return static_cast<int>(weights.rows()); }
};

/// Builds rho and ||W - I||_2 for an arbitrary weight matrix.
MixingMatrix make_mixing(Matrix weights);

/// W = I - scale * L / lambda_max(L).
MixingMatrix laplacian_mixing(const Graph& g, double scale = 0.8);

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> power_start(Eigen::Index n) {
  SplitMix64 rng(0x5EED5EEDULL);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = static_cast<Scalar>(rng.uniform() + 0.5);
  return v;
}

}  // namespace detail

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration. Stops when the Rayleigh quotient changes by less than
/// rel_tol (relative) or after max_iters steps.
template <typename Derived>
typename Derived::Scalar largest_eigenvalue_psd(const Eigen::MatrixBase<Derived>& a,
                                                double rel_tol = 1e-12,
                                                int max_iters = 10000) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  if (n == 0) return Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = detail::power_start<Scalar>(n);
  v.normalize();
  Scalar lambda = v.dot(a * v);
  for (int it = 0; it < max_iters; ++it) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = a * v;
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const Scalar next = v.dot(a * v);
    const bool done = std::abs(next - lambda) <= rel_tol * std::abs(next);
    lambda = next;
    if (done) break;
  }
  return lambda;
}

/// Largest singular value of M = W - 11^T/m, by power iteration on M^T M.
/// Converged when ||M^T M v - s v|| <= rel_tol * s.
template <typename Derived>
typename Derived::Scalar spectral_radius_deviation(const Eigen::MatrixBase<Derived>& w,
                                                   double rel_tol = 1e-10,
                                                   int max_iters = 200000) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index m = w.rows();
  if (m == 0) return Scalar(0);
  Mat dev = w;
  dev.array() -= Scalar(1) / static_cast<Scalar>(m);
  const Mat gram = dev.transpose() * dev;

  Vec v = detail::power_start<Scalar>(m);
  v.normalize();
  Scalar s = 0;
  for (int it = 0; it < max_iters; ++it) {
    const Vec gv = gram * v;
    s = v.dot(gv);
    const Scalar norm = gv.norm();
    if (norm == Scalar(0)) return Scalar(0);
    if ((gv - s * v).norm() <= rel_tol * s) break;
    v = gv / norm;
  }
  return std::sqrt(std::max(s, Scalar(0)));
}

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
  std::vector<std::pair<int, int>> offending;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;  // conditions (i)..(iv) in order

  bool all_passed() const;
  const ValidationCheck& check(int index) const { return checks.at(index); }
};

/// Checks the four gossip-matrix conditions: (i) sparsity follows the graph;
/// (ii) rho < 1; (iii) null(W - I) = span{1} and W^T 1 = 1; (iv) ||W - I||_2 <= 2.
ValidationReport validate_mixing(const MixingMatrix& w, const Graph& g,
                                 double tol = 1e-12);

// Serialization. Mixing CSV: `# m=<m> rho=<rho>` then m comma-separated rows.
// Graph file: `# nodes=<m>` then one `i j` edge per line (0-based).
void write_mixing_csv(std::ostream& out, const MixingMatrix& w);
MixingMatrix read_mixing_csv(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

}  // namespace dgdmax
