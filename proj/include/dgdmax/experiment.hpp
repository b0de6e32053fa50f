#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgdmax/config.hpp"
#include "dgdmax/drlr.hpp"
#include "dgdmax/graph.hpp"
#include "dgdmax/trace.hpp"

namespace dgdmax {

/// Problem, communication graph and mixing matrix built from a config.
struct Instance {
  std::unique_ptr<DrlrProblem> problem;
  Graph graph;
  MixingMatrix mixing;
};

Instance build_instance(const RunConfig& config);
Vector initial_point(const RunConfig& config, int dim);

enum class RunStatus { Success, Diverged, SubsolverExhausted };

/// 0 success, 3 divergence, 4 subsolver budget exhausted.
int exit_code(RunStatus status);
std::string status_name(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::Success;
  std::string message;
  Trace trace;
  bool reached_target = false;
};

/// Runs the configured algorithm and records one trace row per round. When
/// `out` is given (or config.trace_path is set) the trace is streamed there,
/// flushed every config.flush_every rows.
RunResult run_experiment(const RunConfig& config, std::ostream* out = nullptr);

/// Final prox-gradient metric of a trace: prox_grad_p when present, else prox_grad_P.
double final_metric(const Trace& trace);

/// One axis of a stepsize grid: `eta_x=0.5,0.1;eta_y=0.1,0.01`. Bare keys live
/// under `algorithm.`.
struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

std::vector<GridAxis> parse_grid_spec(const std::string& spec);

struct GridCell {
  int index = 0;
  ConfigMap overrides;
  std::optional<RunStatus> status;  // empty when the cell's config was rejected
  std::string error;
  long rounds = 0;
  double final_metric = 0.0;
  bool best = false;
};

/// Runs every cell of the Cartesian grid on top of `base`. Cells are ranked by
/// final metric (failed cells last, ties by index); the best is marked. When
/// trace_dir is nonempty each cell writes cell_<index>.csv there.
std::vector<GridCell> grid_search(const ConfigMap& base, const std::vector<GridAxis>& grid,
                                  int jobs = 1, const std::string& trace_dir = {});

/// Cells in grid order with a rank column.
void write_grid_summary(std::ostream& out, const std::vector<GridCell>& cells);

}  // namespace dgdmax
