#include "dgdmax/graph.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace dgdmax {

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges)
    : node_count_(node_count) {
  if (node_count < 1) throw std::invalid_argument("graph needs at least one node");
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("self-loop on node " + std::to_string(i));
    if (i < 0 || j < 0 || i >= node_count || j >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge");
  edges_ = std::move(edges);
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

bool Graph::is_connected() const {
  if (node_count_ <= 1) return true;
  std::vector<std::vector<int>> adj(node_count_);
  for (const auto& [i, j] : edges_) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(node_count_, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (const int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == node_count_;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(node_count_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

Matrix Graph::laplacian() const {
  Matrix lap = Matrix::Zero(node_count_, node_count_);
  for (const auto& [i, j] : edges_) {
    lap(i, j) = -1.0;
    lap(j, i) = -1.0;
    lap(i, i) += 1.0;
    lap(j, j) += 1.0;
  }
  return lap;
}

Graph gen_erdos_renyi(int nodes, double edge_prob, std::uint64_t seed, int max_attempts) {
  if (nodes < 1) throw std::invalid_argument("gen_erdos_renyi: nodes must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw std::invalid_argument("gen_erdos_renyi: edge probability must lie in [0, 1]");
  if (nodes == 1) return Graph(1, {});

  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < nodes; ++i)
      for (int j = i + 1; j < nodes; ++j)
        if (rng.uniform() < edge_prob) edges.emplace_back(i, j);
    Graph g(nodes, std::move(edges));
    if (g.is_connected()) return g;
  }
  throw GraphGenerationError("no connected Erdos-Renyi sample after " +
                             std::to_string(max_attempts) +
                             " attempts; edge probability too small for " +
                             std::to_string(nodes) + " nodes");
}

Graph ring_graph(int nodes) {
  if (nodes < 1) throw std::invalid_argument("ring_graph: nodes must be >= 1");
  std::vector<std::pair<int, int>> edges;
  if (nodes == 2) edges.emplace_back(0, 1);
  if (nodes >= 3)
    for (int i = 0; i < nodes; ++i) edges.emplace_back(i, (i + 1) % nodes);
  return Graph(nodes, std::move(edges));
}

Graph path_graph(int nodes) {
  if (nodes < 1) throw std::invalid_argument("path_graph: nodes must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < nodes; ++i) edges.emplace_back(i, i + 1);
  return Graph(nodes, std::move(edges));
}

Graph complete_graph(int nodes) {
  if (nodes < 1) throw std::invalid_argument("complete_graph: nodes must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j) edges.emplace_back(i, j);
  return Graph(nodes, std::move(edges));
}

namespace {

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

MixingMatrix make_mixing(Matrix weights) {
  if (weights.rows() != weights.cols()) throw std::invalid_argument("mixing matrix must be square");
  MixingMatrix w;
  w.rho = spectral_radius_deviation(weights);
  w.op_norm_w_minus_i =
      operator_norm(weights - Matrix::Identity(weights.rows(), weights.cols()));
  w.weights = std::move(weights);
  return w;
}

MixingMatrix laplacian_mixing(const Graph& g, double scale) {
  if (!(scale > 0.0 && scale <= 1.0))
    throw std::invalid_argument("laplacian_mixing: scale must lie in (0, 1]");
  const int m = g.node_count();
  if (m == 1) return MixingMatrix{Matrix::Ones(1, 1), 0.0, 0.0};
  if (!g.is_connected())
    throw std::invalid_argument("laplacian_mixing: graph is disconnected");

  const Matrix lap = g.laplacian();
  const double lambda_max = largest_eigenvalue_psd(lap, 1e-12, 10000);
  const double c = scale / lambda_max;
  Matrix w = Matrix::Identity(m, m);
  // Fill symmetric pairs from a single product so W == W^T bitwise.
  for (int i = 0; i < m; ++i) {
    w(i, i) -= c * lap(i, i);
    for (int j = i + 1; j < m; ++j) {
      const double v = -c * lap(i, j);
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return make_mixing(std::move(w));
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport validate_mixing(const MixingMatrix& mix, const Graph& g, double tol) {
  const Matrix& w = mix.weights;
  const int m = static_cast<int>(w.rows());
  if (w.cols() != m || g.node_count() != m)
    throw std::invalid_argument("validate_mixing: dimension mismatch");

  ValidationReport report;

  ValidationCheck sparsity{"(i) weights vanish off the graph", true, 0.0, {}, {}};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && !g.has_edge(i, j) && w(i, j) != 0.0) {
        sparsity.passed = false;
        sparsity.residual = std::max(sparsity.residual, std::abs(w(i, j)));
        sparsity.offending.emplace_back(i, j);
      }
  if (!sparsity.passed)
    sparsity.detail = std::to_string(sparsity.offending.size()) + " nonzero weights on non-edges";
  report.checks.push_back(std::move(sparsity));

  const double rho = spectral_radius_deviation(w);
  ValidationCheck contraction{"(ii) rho < 1", rho < 1.0, rho, {}, {}};
  {
    std::ostringstream s;
    s << "rho=" << std::setprecision(12) << rho;
    contraction.detail = s.str();
  }
  report.checks.push_back(std::move(contraction));

  // (iii): W^T 1 = 1, and W - I has rank m - 1 (second-smallest singular
  // value bounded away from zero) with 1 in its null space.
  const Matrix w_minus_i = w - Matrix::Identity(m, m);
  const Vector ones = Vector::Ones(m);
  const double col_resid = (w.transpose() * ones - ones).lpNorm<Eigen::Infinity>();
  const double null_resid = (w_minus_i * ones).lpNorm<Eigen::Infinity>();
  double second_smallest = 0.0;
  if (m >= 2) {
    Eigen::JacobiSVD<Matrix> svd(w_minus_i);
    const Vector& sv = svd.singularValues();  // descending
    second_smallest = sv(m - 2);
  }
  ValidationCheck kernel{"(iii) null(W - I) = span{1}, W^T 1 = 1", true,
                         std::max(col_resid, null_resid), {}, {}};
  kernel.passed = col_resid <= tol && null_resid <= tol && (m == 1 || second_smallest > 1e-10);
  {
    std::ostringstream s;
    s << std::setprecision(6) << "|W^T1-1|=" << col_resid << " |(W-I)1|=" << null_resid
      << " sigma_{m-1}(W-I)=" << second_smallest;
    kernel.detail = s.str();
  }
  report.checks.push_back(std::move(kernel));

  const double wi_norm = m >= 1 ? operator_norm(w_minus_i) : 0.0;
  ValidationCheck bounded{"(iv) ||W - I||_2 <= 2", wi_norm <= 2.0 + tol, wi_norm, {}, {}};
  report.checks.push_back(std::move(bounded));
  return report;
}

void write_mixing_csv(std::ostream& out, const MixingMatrix& w) {
  const int m = w.size();
  out << "# m=" << m << " rho=" << std::setprecision(17) << w.rho << '\n';
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j) out << ',';
      out << w.weights(i, j);
    }
    out << '\n';
  }
}

MixingMatrix read_mixing_csv(std::istream& in) {
  std::string line;
  int m = -1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("m=");
      if (pos != std::string::npos) m = std::stoi(line.substr(pos + 2));
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("mixing CSV: no rows");
  if (m < 0) m = static_cast<int>(rows.size());
  if (static_cast<int>(rows.size()) != m) throw std::runtime_error("mixing CSV: row count != m");
  Matrix w(m, m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m)
      throw std::runtime_error("mixing CSV: row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < m; ++j) w(i, j) = rows[i][j];
  }
  return make_mixing(std::move(w));
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "# nodes=" << g.node_count() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  int nodes = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("nodes=");
      if (pos != std::string::npos) nodes = std::stoi(line.substr(pos + 6));
      continue;
    }
    std::istringstream ss(line);
    int i = 0, j = 0;
    if (!(ss >> i >> j)) throw std::runtime_error("graph file: malformed edge line '" + line + "'");
    edges.emplace_back(i, j);
  }
  if (nodes < 1) throw std::runtime_error("graph file: missing '# nodes=' header");
  return Graph(nodes, std::move(edges));
}

}  // namespace dgdmax
