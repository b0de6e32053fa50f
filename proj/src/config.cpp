#include "dgdmax/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "dgdmax/random.hpp"
#include "dgdmax/trace.hpp"

namespace dgdmax {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  char prev = 0;
  for (const char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok || (c == '.' && prev == '.')) return false;
    prev = c;
  }
  return true;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "seed",
      "problem.source", "problem.path", "problem.zero_one_labels", "problem.samples",
      "problem.features", "problem.flip_noise", "problem.data_seed", "problem.alpha",
      "problem.beta_x", "problem.beta_y", "problem.lipschitz_radius", "problem.lipschitz",
      "problem.agents", "problem.partition_seed",
      "graph.kind", "graph.nodes", "graph.edge_prob", "graph.seed", "graph.matrix", "graph.scale",
      "algorithm.name", "algorithm.eta_x", "algorithm.eta_lambda", "algorithm.eta_y",
      "algorithm.delta", "algorithm.subsolver", "algorithm.apg_max_iters", "algorithm.max_rounds",
      "algorithm.target_eps", "algorithm.workers",
      "init.x0", "init.seed",
      "output.trace", "output.flush_every"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const ConfigMap& map) : map_(map) {
    for (const auto& [k, v] : map_)
      if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

  bool has(const std::string& key) const { return map_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    return parse_real(key, it->second);
  }

  std::optional<double> real_or_default(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end() || it->second == "paper-default") return std::nullopt;
    return parse_real(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    long v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("config key '" + key + "': expected an integer, got '" + s + "'");
    return v;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    std::uint64_t v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + s + "'");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + it->second + "'");
  }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("config key '" + key + "': expected a number, got '" + s + "'");
    return v;
  }

  const ConfigMap& map_;
};

}  // namespace

ConfigMap parse_config(std::istream& in) {
  ConfigMap map;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_number) + ": missing '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError("config line " + std::to_string(line_number) + ": invalid key '" + key + "'");
    if (!map.emplace(key, value).second)
      throw ConfigError("config line " + std::to_string(line_number) + ": duplicate key '" + key + "'");
  }
  return map;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Dgdmax: return "dgdmax";
    case Algorithm::Gdmax: return "gdmax";
    case Algorithm::Gda: return "gda";
  }
  return "unknown";
}

RunConfig resolve_config(const ConfigMap& map) {
  const Reader r(map);
  RunConfig c;
  c.seed = r.seed("seed", 1);

  c.source = r.str("problem.source", r.has("problem.path") ? "libsvm" : "synthetic");
  if (c.source == "libsvm") {
    if (!r.has("problem.path")) throw ConfigError("problem.source = libsvm needs problem.path");
    for (const char* k : {"problem.samples", "problem.features", "problem.flip_noise", "problem.data_seed"})
      if (r.has(k)) throw ConfigError(std::string("'") + k + "' conflicts with a libsvm source");
    c.data_path = r.str("problem.path", "");
    c.zero_one_labels = r.boolean("problem.zero_one_labels", false);
  } else if (c.source == "synthetic") {
    if (r.has("problem.path")) throw ConfigError("exactly one problem source: path given with a synthetic source");
    c.synthetic.samples = static_cast<int>(r.integer("problem.samples", 200));
    c.synthetic.features = static_cast<int>(r.integer("problem.features", 20));
    c.synthetic.flip_noise = r.real("problem.flip_noise", 0.1);
    c.synthetic.seed = r.seed("problem.data_seed", derive_seed(c.seed, "data"));
    if (c.synthetic.samples < 2 || c.synthetic.features < 1)
      throw ConfigError("synthetic problem needs samples >= 2 and features >= 1");
  } else {
    throw ConfigError("problem.source must be 'synthetic' or 'libsvm'");
  }

  c.drlr.alpha = r.real("problem.alpha", 10.0);
  c.drlr.beta_x = r.real("problem.beta_x", 1e-3);
  c.drlr.beta_y = r.real("problem.beta_y", 0.1);
  c.drlr.lipschitz_radius = r.real("problem.lipschitz_radius", 10.0);
  if (r.has("problem.lipschitz")) c.drlr.lipschitz_override = r.real("problem.lipschitz", 0.0);
  if (!(c.drlr.beta_y > 0.0)) throw ConfigError("problem.beta_y must be positive");
  if (c.drlr.beta_x < 0.0) throw ConfigError("problem.beta_x must be nonnegative");
  c.agents = static_cast<int>(r.integer("problem.agents", 1));
  if (c.agents < 1) throw ConfigError("problem.agents must be >= 1");
  c.partition_seed = r.seed("problem.partition_seed", derive_seed(c.seed, "partition"));

  const std::string name = r.str("algorithm.name", "dgdmax");
  if (name == "dgdmax") c.algorithm = Algorithm::Dgdmax;
  else if (name == "gdmax") c.algorithm = Algorithm::Gdmax;
  else if (name == "gda") c.algorithm = Algorithm::Gda;
  else throw ConfigError("algorithm.name must be dgdmax, gdmax or gda");

  c.graph_kind = r.str("graph.kind", c.agents == 1 ? "complete" : "erdos_renyi");
  if (c.graph_kind != "erdos_renyi" && c.graph_kind != "ring" && c.graph_kind != "complete" &&
      c.graph_kind != "path" && c.graph_kind != "file")
    throw ConfigError("graph.kind must be erdos_renyi, ring, complete, path or file");
  c.graph_nodes = static_cast<int>(r.integer("graph.nodes", c.agents));
  if (c.graph_nodes != c.agents) throw ConfigError("graph.nodes must equal problem.agents");
  c.edge_prob = r.real("graph.edge_prob", 0.3);
  c.graph_seed = r.seed("graph.seed", derive_seed(c.seed, "graph"));
  c.mixing_scale = r.real("graph.scale", 0.8);
  if (c.graph_kind == "file") {
    if (!r.has("graph.matrix")) throw ConfigError("graph.kind = file needs graph.matrix");
    c.matrix_path = r.str("graph.matrix", "");
  }

  c.eta_x = r.real_or_default("algorithm.eta_x");
  c.eta_lambda = r.real_or_default("algorithm.eta_lambda");
  c.eta_y = r.real_or_default("algorithm.eta_y");
  c.delta = r.real_or_default("algorithm.delta");
  for (const auto& v : {c.eta_x, c.eta_lambda, c.eta_y})
    if (v && !(*v > 0.0)) throw ConfigError("stepsizes must be positive");
  if (c.delta && *c.delta < 0.0) throw ConfigError("algorithm.delta must be nonnegative");
  if (c.algorithm == Algorithm::Gda && (!c.eta_x || !c.eta_y))
    throw ConfigError("gda needs explicit algorithm.eta_x and algorithm.eta_y");
  const std::string sub = r.str("algorithm.subsolver", "exact");
  if (sub != "exact" && sub != "apg") throw ConfigError("algorithm.subsolver must be exact or apg");
  c.exact_subsolver = sub == "exact";
  if (!c.exact_subsolver && c.delta && *c.delta == 0.0)
    throw ConfigError("algorithm.delta = 0 requires the exact subsolver");
  c.apg_max_iters = static_cast<int>(r.integer("algorithm.apg_max_iters", 100000));
  c.max_rounds = r.integer("algorithm.max_rounds", 1000);
  if (c.max_rounds < 1) throw ConfigError("algorithm.max_rounds must be >= 1");
  if (r.has("algorithm.target_eps")) {
    c.target_eps = r.real("algorithm.target_eps", 0.0);
    if (!(*c.target_eps > 0.0)) throw ConfigError("algorithm.target_eps must be positive");
  }
  c.workers = static_cast<int>(r.integer("algorithm.workers", 1));
  if (c.workers < 1) throw ConfigError("algorithm.workers must be >= 1");

  c.init = r.str("init.x0", "zero");
  if (c.init != "zero" && c.init != "random") throw ConfigError("init.x0 must be zero or random");
  c.init_seed = r.seed("init.seed", derive_seed(c.seed, "init"));

  c.trace_path = r.str("output.trace", "");
  c.flush_every = r.integer("output.flush_every", 100);
  if (c.flush_every < 1) throw ConfigError("output.flush_every must be >= 1");
  return c;
}

ConfigMap to_config_map(const RunConfig& c) {
  ConfigMap m;
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("paper-default");
  };
  m["seed"] = std::to_string(c.seed);
  m["problem.source"] = c.source;
  if (c.source == "libsvm") {
    m["problem.path"] = c.data_path;
    m["problem.zero_one_labels"] = c.zero_one_labels ? "true" : "false";
  } else {
    m["problem.samples"] = std::to_string(c.synthetic.samples);
    m["problem.features"] = std::to_string(c.synthetic.features);
    m["problem.flip_noise"] = format_double(c.synthetic.flip_noise);
    m["problem.data_seed"] = std::to_string(c.synthetic.seed);
  }
  m["problem.alpha"] = format_double(c.drlr.alpha);
  m["problem.beta_x"] = format_double(c.drlr.beta_x);
  m["problem.beta_y"] = format_double(c.drlr.beta_y);
  m["problem.lipschitz_radius"] = format_double(c.drlr.lipschitz_radius);
  if (c.drlr.lipschitz_override) m["problem.lipschitz"] = format_double(*c.drlr.lipschitz_override);
  m["problem.agents"] = std::to_string(c.agents);
  m["problem.partition_seed"] = std::to_string(c.partition_seed);
  m["graph.kind"] = c.graph_kind;
  m["graph.nodes"] = std::to_string(c.graph_nodes);
  m["graph.edge_prob"] = format_double(c.edge_prob);
  m["graph.seed"] = std::to_string(c.graph_seed);
  m["graph.scale"] = format_double(c.mixing_scale);
  if (c.graph_kind == "file") m["graph.matrix"] = c.matrix_path;
  m["algorithm.name"] = algorithm_name(c.algorithm);
  m["algorithm.eta_x"] = opt(c.eta_x);
  m["algorithm.eta_lambda"] = opt(c.eta_lambda);
  if (c.eta_y) m["algorithm.eta_y"] = format_double(*c.eta_y);
  m["algorithm.delta"] = opt(c.delta);
  m["algorithm.subsolver"] = c.exact_subsolver ? "exact" : "apg";
  m["algorithm.apg_max_iters"] = std::to_string(c.apg_max_iters);
  m["algorithm.max_rounds"] = std::to_string(c.max_rounds);
  if (c.target_eps) m["algorithm.target_eps"] = format_double(*c.target_eps);
  m["algorithm.workers"] = std::to_string(c.workers);
  m["init.x0"] = c.init;
  m["init.seed"] = std::to_string(c.init_seed);
  if (!c.trace_path.empty()) m["output.trace"] = c.trace_path;
  m["output.flush_every"] = std::to_string(c.flush_every);
  return m;
}

std::string canonical_text(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& [k, v] : to_config_map(config)) {
    // Worker count and output location do not affect the numbers produced.
    if (k == "algorithm.workers" || k == "output.trace" || k == "output.flush_every") continue;
    out << k << '=' << v << '\n';
  }
  return out.str();
}

std::uint64_t config_hash(const RunConfig& config) { return fnv1a64(canonical_text(config)); }

}  // namespace dgdmax
