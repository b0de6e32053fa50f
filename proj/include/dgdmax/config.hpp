#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dgdmax/dataset.hpp"
#include "dgdmax/drlr.hpp"

namespace dgdmax {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` pairs. Grammar (one entry per line):
///
///   line    := blank | comment | entry
///   comment := '#' any*
///   entry   := key ws* '=' ws* value
///   key     := [a-z0-9_]+ ('.' [a-z0-9_]+)*
///
/// Values run to end of line, trailing whitespace and `#` comments stripped.
/// Duplicate keys are an error.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(std::istream& in);
ConfigMap read_config_file(const std::string& path);

enum class Algorithm { Dgdmax, Gdmax, Gda };

struct RunConfig {
  std::uint64_t seed = 1;

  // problem
  std::string source = "synthetic";  // synthetic | libsvm
  std::string data_path;
  bool zero_one_labels = false;
  SyntheticSpec synthetic;  // seed resolved from problem.data_seed or the global seed
  DrlrParams drlr;
  int agents = 1;
  std::uint64_t partition_seed = 0;

  // graph
  std::string graph_kind = "erdos_renyi";  // erdos_renyi | ring | complete | path | file
  int graph_nodes = 1;
  double edge_prob = 0.3;
  std::uint64_t graph_seed = 0;
  std::string matrix_path;
  double mixing_scale = 0.8;

  // algorithm
  Algorithm algorithm = Algorithm::Dgdmax;
  std::optional<double> eta_x;       // empty: default formula
  std::optional<double> eta_lambda;  // empty: default formula
  std::optional<double> eta_y;       // required by gda
  std::optional<double> delta;       // empty: default delta_t rule; value: constant
  bool exact_subsolver = true;
  int apg_max_iters = 100000;
  long max_rounds = 1000;
  std::optional<double> target_eps;
  int workers = 1;

  // initial point
  std::string init = "zero";  // zero | random
  std::uint64_t init_seed = 0;

  // output
  std::string trace_path;
  long flush_every = 100;
};

/// Validates and resolves a key-value map; missing seeds are derived from the
/// global seed by name (graph, partition, data, init).
RunConfig resolve_config(const ConfigMap& map);

/// Canonical resolved form, one `key=value` per entry in key order.
ConfigMap to_config_map(const RunConfig& config);
std::string canonical_text(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

std::string algorithm_name(Algorithm a);

}  // namespace dgdmax
