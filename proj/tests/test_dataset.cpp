#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dgdmax/dataset.hpp"
#include "oracles.hpp"

using namespace dgdmax;

namespace {

Dataset parse(const std::string& text, LibsvmOptions opts = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, opts);
}

int error_line(const std::string& text, LibsvmOptions opts = {}) {
  try {
    parse(text, opts);
  } catch (const ParseError& e) {
    return e.line_number;
  }
  return -1;
}

}  // namespace

TEST(Libsvm, SingleLine) {
  const Dataset ds = parse("+1 1:0.5 3:2\n");
  ASSERT_EQ(ds.sample_count(), 1);
  ASSERT_EQ(ds.feature_dim(), 3);
  EXPECT_EQ(ds.labels(0), 1.0);
  const Matrix dense = Matrix(ds.features);
  EXPECT_EQ(dense(0, 0), 0.5);
  EXPECT_EQ(dense(0, 1), 0.0);
  EXPECT_EQ(dense(0, 2), 2.0);
}

TEST(Libsvm, EmptyStream) {
  try {
    parse("");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("empty dataset"), std::string::npos);
  }
}

TEST(Libsvm, HandwrittenFixture) {
  const Dataset ds = read_libsvm_file(std::string(DGDMAX_GOLDEN_DIR) + "/fixture5.libsvm");
  Matrix expected(5, 4);
  expected << 0.5, 0, 2, 0,
              0, -1.25, 0, 4,
              1, 1, 1, 1,
              0, 0, 0, 0.125,
              0, 0, -0.3, 0;
  Vector labels(5);
  labels << 1, -1, 1, -1, 1;
  EXPECT_EQ(Matrix(ds.features), expected);
  EXPECT_EQ(ds.labels, labels);
}

TEST(Libsvm, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("+1 1:1\n-1 2:x\n"), 2);
  EXPECT_EQ(error_line("+1 1:1\n\n+1 3:1 2:1\n"), 3);
  EXPECT_EQ(error_line("+1 1:1 1:2\n"), 1);
  EXPECT_EQ(error_line("2 1:1\n"), 1);
  EXPECT_EQ(error_line("+1 0:1\n"), 1);
  EXPECT_EQ(error_line("+1 1\n"), 1);
  EXPECT_EQ(error_line("0 1:1\n"), 1);
}

TEST(Libsvm, ZeroOneLabelsBehindFlag) {
  LibsvmOptions opts;
  opts.zero_one_labels = true;
  const Dataset ds = parse("0 1:1\n1 2:1\n", opts);
  EXPECT_EQ(ds.labels(0), -1.0);
  EXPECT_EQ(ds.labels(1), 1.0);
}

TEST(Libsvm, FeatureDimensionOverride) {
  LibsvmOptions opts;
  opts.feature_dim = 7;
  EXPECT_EQ(parse("+1 2:1\n", opts).feature_dim(), 7);
  opts.feature_dim = 1;
  EXPECT_THROW(parse("+1 2:1\n", opts), ParseError);
}

TEST(Libsvm, WriteParseRoundTrip) {
  SyntheticSpec spec;
  spec.samples = 30;
  spec.features = 6;
  const Dataset ds = gen_synthetic(spec);
  std::stringstream buf;
  write_libsvm(buf, ds);
  const Dataset back = parse_libsvm(buf);
  EXPECT_EQ(Matrix(back.features), Matrix(ds.features));
  EXPECT_EQ(back.labels, ds.labels);
}

TEST(Partition, CardinalityForced) {
  const Partition p = partition_dataset(4, 2, 123);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].size(), 2u);
  EXPECT_EQ(p[1].size(), 2u);
  EXPECT_TRUE(is_disjoint_cover(p, 4));
}

TEST(Partition, BalancedSizes) {
  const Partition p = partition_dataset(10, 3, 5);
  std::vector<std::size_t> sizes;
  for (const auto& part : p) sizes.push_back(part.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 4}));
  EXPECT_TRUE(is_disjoint_cover(p, 10));
}

TEST(Partition, GoldenReferenceRun) {
  std::ifstream in(std::string(DGDMAX_GOLDEN_DIR) + "/partition_n100_m20_seed7.txt");
  ASSERT_TRUE(in.good());
  const Partition golden = read_partition(in);
  EXPECT_EQ(partition_dataset(100, 20, 7), golden);
}

TEST(Partition, DisjointCoverExhaustive) {
  for (int n = 1; n <= 40; ++n)
    for (int m = 1; m <= n; ++m)
      ASSERT_TRUE(is_disjoint_cover(partition_dataset(n, m, n * 100 + m), n)) << n << " " << m;
  EXPECT_FALSE(is_disjoint_cover({{0, 1}, {1, 2}}, 3));
  EXPECT_FALSE(is_disjoint_cover({{0}, {2}}, 3));
}

TEST(Partition, TooManyAgents) { EXPECT_THROW(partition_dataset(3, 4, 1), std::invalid_argument); }

TEST(Partition, FileRoundTrip) {
  const Partition p = partition_dataset(23, 4, 9);
  std::stringstream buf;
  write_partition(buf, p);
  EXPECT_EQ(read_partition(buf), p);
}

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticSpec spec;
  spec.seed = 42;
  const Dataset a = gen_synthetic(spec);
  const Dataset b = gen_synthetic(spec);
  EXPECT_EQ(Matrix(a.features), Matrix(b.features));
  EXPECT_EQ(a.labels, b.labels);
  spec.seed = 43;
  EXPECT_NE(gen_synthetic(spec).labels, a.labels);
}

TEST(Synthetic, NoFlipNoiseIsSeparable) {
  SyntheticSpec spec;
  spec.flip_noise = 0.0;
  spec.samples = 120;
  spec.features = 8;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    spec.seed = seed;
    const Dataset ds = gen_synthetic(spec);
    EXPECT_TRUE(oracle::perceptron_separates(Matrix(ds.features), ds.labels)) << seed;
  }
}

TEST(Synthetic, DefaultClassBalance) {
  const Dataset ds = gen_synthetic(SyntheticSpec{});
  const double positive = (ds.labels.array() > 0.0).cast<double>().mean();
  EXPECT_GE(positive, 0.3);
  EXPECT_LE(positive, 0.7);
  EXPECT_EQ(ds.sample_count(), 200);
  EXPECT_EQ(ds.feature_dim(), 20);
}

TEST(Synthetic, RejectsDegenerateSizes) {
  SyntheticSpec spec;
  spec.samples = 1;
  EXPECT_THROW(gen_synthetic(spec), std::invalid_argument);
}
