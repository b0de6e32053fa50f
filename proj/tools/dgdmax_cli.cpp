// Command-line harness: runs, stepsize grids, graph/data generation and property checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dgdmax/checks.hpp"
#include "dgdmax/config.hpp"
#include "dgdmax/dataset.hpp"
#include "dgdmax/experiment.hpp"
#include "dgdmax/graph.hpp"

namespace {

constexpr int kConfigError = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

int cmd_run(const std::string& config_path, const std::string& trace, int workers) {
  dgdmax::ConfigMap map = dgdmax::read_config_file(config_path);
  if (!trace.empty()) map["output.trace"] = trace;
  if (workers > 0) map["algorithm.workers"] = std::to_string(workers);
  const dgdmax::RunConfig config = dgdmax::resolve_config(map);
  const dgdmax::RunResult r =
      config.trace_path.empty() ? dgdmax::run_experiment(config, &std::cout)
                                : dgdmax::run_experiment(config);
  std::cerr << "status: " << dgdmax::status_name(r.status);
  if (!r.trace.rows.empty()) std::cerr << ", rounds recorded: " << r.trace.rows.size();
  if (!r.message.empty()) std::cerr << " (" << r.message << ")";
  std::cerr << '\n';
  return dgdmax::exit_code(r.status);
}

int cmd_grid(const std::string& config_path, const std::string& spec, int jobs,
             const std::string& out_path, const std::string& trace_dir) {
  const dgdmax::ConfigMap base = dgdmax::read_config_file(config_path);
  dgdmax::resolve_config(base);
  const auto axes = dgdmax::parse_grid_spec(spec);
  const auto cells = dgdmax::grid_search(base, axes, jobs, trace_dir);
  if (out_path.empty()) {
    dgdmax::write_grid_summary(std::cout, cells);
  } else {
    std::ofstream out = open_out(out_path);
    dgdmax::write_grid_summary(out, cells);
  }
  return 0;
}

int cmd_gen_graph(int nodes, double p, std::uint64_t seed, const std::string& out_path,
                  const std::string& mixing_path, double scale) {
  const dgdmax::Graph g = dgdmax::gen_erdos_renyi(nodes, p, seed);
  std::ofstream out = open_out(out_path);
  dgdmax::write_graph(out, g);
  if (!mixing_path.empty()) {
    std::ofstream mix = open_out(mixing_path);
    dgdmax::write_mixing_csv(mix, dgdmax::laplacian_mixing(g, scale));
  }
  std::cerr << "nodes " << nodes << ", edges " << g.edges().size() << '\n';
  return 0;
}

int cmd_validate_mixing(const std::string& matrix_path, const std::string& graph_path) {
  std::ifstream min = open_in(matrix_path);
  const dgdmax::MixingMatrix w = dgdmax::read_mixing_csv(min);
  std::ifstream gin = open_in(graph_path);
  const dgdmax::Graph g = dgdmax::read_graph(gin);
  const dgdmax::ValidationReport report = dgdmax::validate_mixing(w, g);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << c.residual;
    if (!c.detail.empty()) std::cout << " " << c.detail;
    std::cout << '\n';
  }
  std::cout << "rho=" << w.rho << '\n';
  return report.all_passed() ? 0 : 1;
}

int cmd_gen_data(const dgdmax::SyntheticSpec& spec, const std::string& out_path,
                 const std::string& partition_path, int agents, std::uint64_t partition_seed) {
  const dgdmax::Dataset ds = dgdmax::gen_synthetic(spec);
  std::ofstream out = open_out(out_path);
  dgdmax::write_libsvm(out, ds);
  if (!partition_path.empty()) {
    std::ofstream part = open_out(partition_path);
    dgdmax::write_partition(part, dgdmax::partition_dataset(ds.sample_count(), agents, partition_seed));
  }
  return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed) {
  const auto outcomes = dgdmax::run_check_suite(suite, seed);
  dgdmax::print_outcomes(std::cout, outcomes);
  for (const auto& o : outcomes)
    if (!o.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized gradient descent maximization harness"};
  app.require_subcommand(1);

  std::string config_path, trace, grid_spec, out_path, trace_dir, matrix_path, graph_path;
  std::string mixing_path, partition_path, suite;
  int workers = 0, jobs = 1, nodes = 20, agents = 1;
  double edge_prob = 0.3, scale = 0.8;
  std::uint64_t seed = 1, partition_seed = 1;
  dgdmax::SyntheticSpec spec;

  auto* run = app.add_subcommand("run", "Run one experiment and write its trace");
  run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--trace", trace, "Trace CSV path (overrides output.trace; default stdout)");
  run->add_option("--workers", workers, "Worker threads for per-agent work");

  auto* grid = app.add_subcommand("grid", "Run a stepsize grid and summarize");
  grid->add_option("--config", config_path, "Base config file")->required()->check(CLI::ExistingFile);
  grid->add_option("--grid", grid_spec, "Grid, e.g. 'eta_x=0.5,0.1;eta_y=0.1,0.01'")->required();
  grid->add_option("--jobs", jobs, "Cells run in parallel");
  grid->add_option("--out", out_path, "Summary CSV path (default stdout)");
  grid->add_option("--trace-dir", trace_dir, "Directory for per-cell traces");

  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a connected Erdos-Renyi graph");
  gen_graph->add_option("--nodes", nodes, "Node count")->required();
  gen_graph->add_option("--edge-prob", edge_prob, "Edge probability");
  gen_graph->add_option("--seed", seed, "Seed");
  gen_graph->add_option("--out", out_path, "Graph file")->required();
  gen_graph->add_option("--mixing", mixing_path, "Also write the Laplacian mixing matrix CSV");
  gen_graph->add_option("--scale", scale, "Laplacian scale");

  auto* validate = app.add_subcommand("validate-mixing", "Check a mixing matrix against a graph");
  validate->add_option("--matrix", matrix_path, "Mixing matrix CSV")->required()->check(CLI::ExistingFile);
  validate->add_option("--graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);

  auto* gen_data = app.add_subcommand("gen-data", "Generate a synthetic LIBSVM dataset");
  gen_data->add_option("--samples", spec.samples, "Sample count N");
  gen_data->add_option("--features", spec.features, "Feature count n");
  gen_data->add_option("--flip-noise", spec.flip_noise, "Label flip probability");
  gen_data->add_option("--seed", spec.seed, "Seed");
  gen_data->add_option("--out", out_path, "LIBSVM output path")->required();
  gen_data->add_option("--partition", partition_path, "Also write an agent partition");
  gen_data->add_option("--agents", agents, "Agents for --partition");
  gen_data->add_option("--partition-seed", partition_seed, "Seed for --partition");

  auto* check = app.add_subcommand("check", "Run a property suite");
  check->add_option("--suite", suite, "invariants | paper-properties")
      ->required()
      ->check(CLI::IsMember({"invariants", "paper-properties"}));
  check->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, trace, workers);
    if (*grid) return cmd_grid(config_path, grid_spec, jobs, out_path, trace_dir);
    if (*gen_graph) return cmd_gen_graph(nodes, edge_prob, seed, out_path, mixing_path, scale);
    if (*validate) return cmd_validate_mixing(matrix_path, graph_path);
    if (*gen_data) return cmd_gen_data(spec, out_path, partition_path, agents, partition_seed);
    if (*check) return cmd_check(suite, seed);
  } catch (const dgdmax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
