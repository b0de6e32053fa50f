#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgdmax/types.hpp"

namespace dgdmax {

/// Labelled sparse samples: row j of `features` is a_j, labels(j) = b_j in {-1, +1}.
struct Dataset {
  SparseMatrix features;
  Vector labels;

  int feature_dim() const { return static_cast<int>(features.cols()); }
  int sample_count() const { return static_cast<int>(features.rows()); }
};

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  int line_number;
};

struct LibsvmOptions {
  bool zero_one_labels = false;  // map label 0 to -1
  int feature_dim = 0;           // 0: max index seen
};

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset read_libsvm_file(const std::string& path, const LibsvmOptions& options = {});
void write_libsvm(std::ostream& out, const Dataset& ds);

/// Agent index sets J_1..J_m (0-based sample indices).
using Partition = std::vector<std::vector<int>>;

/// Fisher-Yates shuffle of 0..N-1 driven by SplitMix64(seed) (for i = N-1..1,
/// swap i with next() % (i + 1)), then m contiguous chunks; the first N % m
/// chunks get ceil(N/m) indices.
Partition partition_dataset(int sample_count, int agents, std::uint64_t seed);

bool is_disjoint_cover(const Partition& parts, int sample_count);

/// One whitespace-separated line of 0-based indices per agent.
void write_partition(std::ostream& out, const Partition& parts);
Partition read_partition(std::istream& in);

struct SyntheticSpec {
  int features = 20;
  int samples = 200;
  double flip_noise = 0.1;
  std::uint64_t seed = 1;
};

/// Features a_j ~ N(0, I/n); hyperplane w ~ N(0, I); b_j = sign(w^T a_j),
/// flipped with probability flip_noise. Deterministic per seed.
Dataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace dgdmax
