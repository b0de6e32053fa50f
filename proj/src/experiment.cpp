#include "dgdmax/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "dgdmax/centralized.hpp"
#include "dgdmax/dgdmax.hpp"
#include "dgdmax/metrics.hpp"
#include "dgdmax/random.hpp"
#include "dgdmax/schedule.hpp"

namespace dgdmax {

namespace {

Graph make_graph(const RunConfig& c) {
  if (c.graph_kind == "erdos_renyi") return gen_erdos_renyi(c.agents, c.edge_prob, c.graph_seed);
  if (c.graph_kind == "ring") return ring_graph(c.agents);
  if (c.graph_kind == "path") return path_graph(c.agents);
  return complete_graph(c.agents);
}

// Graph implied by the nonzero off-diagonal pattern of W.
Graph support_graph(const Matrix& w) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = i + 1; j < w.cols(); ++j)
      if (w(i, j) != 0.0 || w(j, i) != 0.0) edges.emplace_back(i, j);
  return Graph(static_cast<int>(w.rows()), edges);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

class TraceSink {
 public:
  TraceSink(std::ostream* out, long flush_every) : out_(out), flush_every_(flush_every) {}

  void header(const std::vector<std::string>& comments) {
    trace.comments = comments;
    if (out_) write_trace_header(*out_, comments);
  }
  void row(const TraceRow& r) {
    trace.rows.push_back(r);
    if (!out_) return;
    write_trace_row(*out_, r);
    if (static_cast<long>(trace.rows.size()) % flush_every_ == 0) out_->flush();
  }
  void comment(const std::string& c) {
    trace.comments.push_back(c);
    if (out_) *out_ << "# " << c << '\n';
  }
  void finish() {
    if (out_) out_->flush();
  }

  Trace trace;

 private:
  std::ostream* out_;
  long flush_every_;
};

TraceRow diverged_row(long t) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  TraceRow r;
  r.t = t;
  r.prox_grad_P = r.consensus_x = r.consensus_x_scaled = r.lambda_grad = nan;
  r.prox_grad_p = nan;
  r.tracking_residual = r.delta_t = nan;
  return r;
}

struct Derived {
  ProblemConstants k;
  double rho = 0.0;
  Stepsizes eta;
  double eta_y = 0.0;
};

Derived derive(const RunConfig& c, const Instance& inst) {
  Derived d;
  d.k = inst.problem->constants();
  d.rho = inst.mixing.rho;
  const double rho = c.algorithm == Algorithm::Dgdmax ? d.rho : 0.0;
  d.eta = default_stepsizes(d.k.L, d.k.kappa(), rho);
  if (c.eta_x) d.eta.eta_x = *c.eta_x;
  if (c.eta_lambda) d.eta.eta_lambda = *c.eta_lambda;
  if (c.eta_y) d.eta_y = *c.eta_y;
  return d;
}

std::vector<std::string> header_comments(const RunConfig& c, const Derived& d,
                                         const std::optional<std::pair<double, double>>& v_perp) {
  std::vector<std::string> out;
  out.push_back("config_hash=" + hex64(config_hash(c)));
  for (const auto& [k, v] : to_config_map(c)) out.push_back("config." + k + "=" + v);
  out.push_back("derived.L=" + format_double(d.k.L));
  out.push_back("derived.mu=" + format_double(d.k.mu));
  out.push_back("derived.L_y=" + format_double(d.k.L_y));
  out.push_back("derived.kappa=" + format_double(d.k.kappa()));
  out.push_back("derived.rho=" + format_double(d.rho));
  out.push_back("derived.eta_x=" + format_double(d.eta.eta_x));
  if (c.algorithm == Algorithm::Dgdmax)
    out.push_back("derived.eta_lambda=" + format_double(d.eta.eta_lambda));
  if (c.algorithm == Algorithm::Gda) out.push_back("derived.eta_y=" + format_double(d.eta_y));
  if (v_perp) {
    out.push_back("derived.v_perp0=" + format_double(v_perp->first));
    out.push_back("derived.v_perp0_threshold=" + format_double(v_perp->second));
  }
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

RunResult run_decentralized(const RunConfig& c, const Instance& inst, const Derived& d,
                            TraceSink& sink) {
  const MinimaxProblem& problem = *inst.problem;
  Schedule schedule = paper_schedule(d.k, d.rho);
  schedule.eta_x = d.eta.eta_x;
  schedule.eta_lambda = d.eta.eta_lambda;
  if (c.delta) {
    const double delta = *c.delta;
    schedule.delta = [delta](long) { return delta; };
  }
  schedule.use_exact_dual = c.exact_subsolver;
  DgdmaxOptions options;
  options.workers = c.workers;
  options.apg_max_iters = c.apg_max_iters;
  const DecentralizedGdmax alg(problem, inst.mixing, schedule, options);

  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    NetworkState s = alg.init(initial_point(c, problem.dim_x()));
    const double m = problem.agents();
    const double v_perp = deviation(s.V).second.norm();
    const double threshold = std::sqrt(2.0 * m * d.k.L * d.k.kappa() * (1.0 - d.rho));
    sink.header(header_comments(c, d, std::make_pair(v_perp, threshold)));
    for (;;) {
      const StationarityReport rep = stationarity_report(problem, inst.mixing, s, schedule.eta_x);
      TraceRow row;
      row.t = s.t;
      row.prox_grad_P = rep.prox_grad_norm_P;
      row.prox_grad_p = rep.prox_grad_norm_p;
      row.consensus_x = rep.consensus_x_raw;
      row.consensus_x_scaled = rep.consensus_x;
      row.lambda_grad = rep.lambda_grad_norm;
      row.lambda_grad_is_surrogate = rep.lambda_grad_is_surrogate;
      row.tracking_residual = rep.tracking_residual;
      row.subsolver_iters = s.subsolver_iters;
      row.delta_t = s.delta;
      row.wall_ms = elapsed_ms(start);
      sink.row(row);
      if (c.target_eps && rep.prox_grad_norm_P <= *c.target_eps &&
          rep.consensus_x <= *c.target_eps && rep.lambda_grad_norm <= *c.target_eps) {
        result.reached_target = true;
        break;
      }
      if (s.t + 1 >= c.max_rounds) break;
      s = alg.step(s);
    }
  } catch (const DivergenceError& e) {
    if (sink.trace.comments.empty()) sink.header(header_comments(c, d, std::nullopt));
    sink.row(diverged_row(e.round));
    result.status = RunStatus::Diverged;
    result.message = e.what();
  } catch (const SubsolverBudgetError& e) {
    if (sink.trace.comments.empty()) sink.header(header_comments(c, d, std::nullopt));
    result.status = RunStatus::SubsolverExhausted;
    result.message = e.what();
  }
  return result;
}

RunResult run_centralized(const RunConfig& c, const Instance& inst, const Derived& d,
                          TraceSink& sink) {
  const MinimaxProblem& problem = *inst.problem;
  sink.header(header_comments(c, d, std::nullopt));
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  const auto observer = [&](long t, const Vector&, const Vector&, double pg) {
    TraceRow row;
    row.t = t;
    row.prox_grad_P = pg;
    row.prox_grad_p = pg;
    row.wall_ms = elapsed_ms(start);
    sink.row(row);
    if (c.target_eps && pg <= *c.target_eps) {
      result.reached_target = true;
      return false;
    }
    return true;
  };
  const Vector x0 = initial_point(c, problem.dim_x());
  CentralizedResult res;
  if (c.algorithm == Algorithm::Gdmax) {
    res = gdmax_run(problem, x0, d.eta.eta_x, c.max_rounds, observer);
  } else {
    const Vector y0 = problem.prox_h(Vector::Zero(problem.dim_y()), d.eta_y);
    res = gda_run(problem, x0, y0, d.eta.eta_x, d.eta_y, c.max_rounds, observer);
  }
  if (res.diverged) {
    sink.row(diverged_row(res.diverged_at));
    result.status = RunStatus::Diverged;
    result.message = "round " + std::to_string(res.diverged_at) +
                     ": iterate is non-finite or exceeds the divergence limit";
  }
  return result;
}

// Cell indices best first; failed cells last, ties by grid index.
std::vector<int> ranking(const std::vector<GridCell>& cells) {
  std::vector<int> order(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) order[i] = static_cast<int>(i);
  auto failed = [&](int i) {
    return !cells[i].status || *cells[i].status != RunStatus::Success;
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (failed(a) != failed(b)) return !failed(a);
    return cells[a].final_metric < cells[b].final_metric;
  });
  return order;
}

}  // namespace

Instance build_instance(const RunConfig& c) {
  Dataset data;
  if (c.source == "libsvm") {
    LibsvmOptions opts;
    opts.zero_one_labels = c.zero_one_labels;
    data = read_libsvm_file(c.data_path, opts);
  } else {
    data = gen_synthetic(c.synthetic);
  }
  if (c.agents > data.sample_count())
    throw ConfigError("problem.agents exceeds the number of samples");
  Partition parts = partition_dataset(data.sample_count(), c.agents, c.partition_seed);

  Instance inst;
  inst.problem = std::make_unique<DrlrProblem>(std::move(data), std::move(parts), c.drlr);
  if (c.graph_kind == "file") {
    std::ifstream in(c.matrix_path);
    if (!in) throw ConfigError("cannot open mixing matrix '" + c.matrix_path + "'");
    inst.mixing = read_mixing_csv(in);
    if (inst.mixing.size() != c.agents)
      throw ConfigError("mixing matrix size does not match problem.agents");
    inst.graph = support_graph(inst.mixing.weights);
  } else {
    inst.graph = make_graph(c);
    inst.mixing = laplacian_mixing(inst.graph, c.mixing_scale);
  }
  return inst;
}

Vector initial_point(const RunConfig& c, int dim) {
  if (c.init == "zero") return Vector::Zero(dim);
  SplitMix64 rng(c.init_seed);
  Vector x(dim);
  for (int k = 0; k < dim; ++k) x(k) = rng.normal();
  return x;
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Success: return 0;
    case RunStatus::Diverged: return 3;
    case RunStatus::SubsolverExhausted: return 4;
  }
  return 1;
}

std::string status_name(RunStatus status) {
  switch (status) {
    case RunStatus::Success: return "success";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::SubsolverExhausted: return "subsolver_exhausted";
  }
  return "unknown";
}

RunResult run_experiment(const RunConfig& config, std::ostream* out) {
  std::ofstream file;
  if (!out && !config.trace_path.empty()) {
    file.open(config.trace_path);
    if (!file) throw std::runtime_error("cannot open trace file '" + config.trace_path + "'");
    out = &file;
  }
  const Instance inst = build_instance(config);
  const Derived d = derive(config, inst);
  TraceSink sink(out, config.flush_every);
  RunResult result = config.algorithm == Algorithm::Dgdmax
                         ? run_decentralized(config, inst, d, sink)
                         : run_centralized(config, inst, d, sink);
  sink.comment("status=" + status_name(result.status));
  if (!result.message.empty()) sink.comment("message=" + result.message);
  sink.finish();
  if (file.is_open() && !file) throw std::runtime_error("error writing trace file");
  result.trace = std::move(sink.trace);
  return result;
}

double final_metric(const Trace& trace) {
  for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it) {
    const double v = it->prox_grad_p ? *it->prox_grad_p : it->prox_grad_P;
    if (std::isfinite(v)) return v;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<GridAxis> parse_grid_spec(const std::string& spec) {
  std::vector<GridAxis> axes;
  std::stringstream all(spec);
  std::string part;
  while (std::getline(all, part, ';')) {
    if (part.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("grid axis '" + part + "' is missing '='");
    GridAxis axis;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    axis.key = trim(part.substr(0, eq));
    if (axis.key.find('.') == std::string::npos) axis.key = "algorithm." + axis.key;
    std::stringstream values(part.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
      v = trim(v);
      if (v.empty()) throw ConfigError("grid axis '" + axis.key + "' has an empty value");
      axis.values.push_back(v);
    }
    if (axis.values.empty()) throw ConfigError("grid axis '" + axis.key + "' has no values");
    for (const auto& other : axes)
      if (other.key == axis.key) throw ConfigError("grid axis '" + axis.key + "' given twice");
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw ConfigError("empty grid");
  return axes;
}

std::vector<GridCell> grid_search(const ConfigMap& base, const std::vector<GridAxis>& grid,
                                  int jobs, const std::string& trace_dir) {
  if (grid.empty()) throw ConfigError("empty grid");
  std::size_t total = 1;
  for (const auto& axis : grid) total *= axis.values.size();

  std::vector<GridCell> cells(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    GridCell& cell = cells[idx];
    cell.index = static_cast<int>(idx);
    for (auto axis = grid.rbegin(); axis != grid.rend(); ++axis) {
      cell.overrides[axis->key] = axis->values[rem % axis->values.size()];
      rem /= axis->values.size();
    }
  }

  for_each_agent(static_cast<int>(total), std::max(1, jobs), [&](int idx) {
    GridCell& cell = cells[idx];
    try {
      ConfigMap map = base;
      for (const auto& [k, v] : cell.overrides) map[k] = v;
      map.erase("output.trace");
      if (!trace_dir.empty())
        map["output.trace"] = trace_dir + "/cell_" + std::to_string(idx) + ".csv";
      RunConfig config = resolve_config(map);
      config.workers = 1;
      const RunResult r = run_experiment(config);
      cell.status = r.status;
      cell.error = r.message;
      cell.rounds = r.trace.rows.empty() ? 0 : r.trace.rows.back().t;
      cell.final_metric = r.status == RunStatus::Success
                              ? final_metric(r.trace)
                              : std::numeric_limits<double>::infinity();
    } catch (const std::exception& e) {
      cell.status.reset();
      cell.error = e.what();
      cell.final_metric = std::numeric_limits<double>::infinity();
    }
  });

  const std::vector<int> order = ranking(cells);
  const GridCell& top = cells[order.front()];
  if (top.status && *top.status == RunStatus::Success) cells[order.front()].best = true;
  return cells;
}

void write_grid_summary(std::ostream& out, const std::vector<GridCell>& cells) {
  const std::vector<int> order = ranking(cells);
  std::vector<int> rank(cells.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;

  std::vector<std::string> keys;
  if (!cells.empty())
    for (const auto& [k, v] : cells.front().overrides) keys.push_back(k);
  out << "cell";
  for (const auto& k : keys) out << ',' << k;
  out << ",status,rounds,final_metric,rank,best\n";
  for (const auto& cell : cells) {
    out << cell.index;
    for (const auto& k : keys) out << ',' << cell.overrides.at(k);
    out << ',' << (cell.status ? status_name(*cell.status) : std::string("config_error")) << ','
        << cell.rounds << ',' << format_double(cell.final_metric) << ',' << rank[cell.index]
        << ',' << (cell.best ? 1 : 0) << '\n';
  }
}

}  // namespace dgdmax
