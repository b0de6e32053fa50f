#include "dgdmax/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dgdmax/random.hpp"

namespace dgdmax {

namespace {

double parse_double(std::string_view token, int line, const char* what) {
  double value = 0.0;
  // from_chars does not accept a leading '+'.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
  return value;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> labels;
  int max_index = 0;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;

    const double raw = parse_double(token, line_number, "label");
    double label = raw;
    if (options.zero_one_labels && raw == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0)
      throw ParseError(line_number, "label '" + token + "' outside the accepted set");
    const int row = static_cast<int>(labels.size());
    labels.push_back(label);

    int previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
        throw ParseError(line_number, "malformed feature token '" + token + "'");
      int index = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, index);
      if (ec != std::errc() || ptr != token.data() + colon || index < 1)
        throw ParseError(line_number, "malformed feature index in '" + token + "'");
      if (index <= previous)
        throw ParseError(line_number, "feature indices not ascending at '" + token + "'");
      previous = index;
      const double value =
          parse_double(std::string_view(token).substr(colon + 1), line_number, "feature value");
      max_index = std::max(max_index, index);
      if (value != 0.0) triplets.emplace_back(row, index - 1, value);
    }
  }
  if (labels.empty()) throw ParseError(line_number, "empty dataset");
  if (options.feature_dim > 0 && options.feature_dim < max_index)
    throw ParseError(line_number, "feature index " + std::to_string(max_index) +
                                      " exceeds declared dimension " +
                                      std::to_string(options.feature_dim));
  const int n = options.feature_dim > 0 ? options.feature_dim : max_index;

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(labels.size()), n);
  ds.features.setFromTriplets(triplets.begin(), triplets.end());
  ds.features.makeCompressed();
  ds.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  return ds;
}

Dataset read_libsvm_file(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return parse_libsvm(in, options);
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  out << std::setprecision(17);
  for (int j = 0; j < ds.sample_count(); ++j) {
    out << (ds.labels(j) > 0 ? "+1" : "-1");
    for (SparseMatrix::InnerIterator it(ds.features, j); it; ++it)
      out << ' ' << it.col() + 1 << ':' << it.value();
    out << '\n';
  }
}

Partition partition_dataset(int sample_count, int agents, std::uint64_t seed) {
  if (agents < 1) throw std::invalid_argument("partition_dataset: agents must be >= 1");
  if (agents > sample_count)
    throw std::invalid_argument("partition_dataset: more agents (" + std::to_string(agents) +
                                ") than samples (" + std::to_string(sample_count) + ")");
  std::vector<int> order(sample_count);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (int i = sample_count - 1; i >= 1; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  Partition parts(agents);
  const int base = sample_count / agents;
  const int extra = sample_count % agents;
  int cursor = 0;
  for (int a = 0; a < agents; ++a) {
    const int size = base + (a < extra ? 1 : 0);
    parts[a].assign(order.begin() + cursor, order.begin() + cursor + size);
    cursor += size;
  }
  return parts;
}

bool is_disjoint_cover(const Partition& parts, int sample_count) {
  std::vector<int> hits(sample_count, 0);
  for (const auto& part : parts)
    for (const int j : part) {
      if (j < 0 || j >= sample_count) return false;
      ++hits[j];
    }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

void write_partition(std::ostream& out, const Partition& parts) {
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < part.size(); ++k) {
      if (k) out << ' ';
      out << part[k];
    }
    out << '\n';
  }
}

Partition read_partition(std::istream& in) {
  Partition parts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<int> part;
    int j = 0;
    while (ss >> j) part.push_back(j);
    if (!ss.eof()) throw std::runtime_error("partition file: malformed line '" + line + "'");
    parts.push_back(std::move(part));
  }
  return parts;
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
  if (spec.samples < 2 || spec.features < 1)
    throw std::invalid_argument("gen_synthetic: need samples >= 2 and features >= 1");
  SplitMix64 rng(spec.seed);
  const int n = spec.features;
  const int count = spec.samples;
  Vector hyperplane(n);
  for (int k = 0; k < n; ++k) hyperplane(k) = rng.normal();

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix dense(count, n);
  Vector labels(count);
  for (int j = 0; j < count; ++j) {
    for (int k = 0; k < n; ++k) dense(j, k) = scale * rng.normal();
    double b = dense.row(j).dot(hyperplane) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < spec.flip_noise) b = -b;
    labels(j) = b;
  }
  Dataset ds;
  ds.features = dense.sparseView();
  ds.features.makeCompressed();
  ds.labels = std::move(labels);
  return ds;
}

}  // namespace dgdmax
