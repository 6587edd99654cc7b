#include "lidartrack/dbscan.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lidartrack/errors.hpp"
#include "support/oracles.hpp"

namespace lidartrack {
namespace {

ClusterLabels run(const std::vector<Vec3>& pts, ClusteringParams params) {
  const KdTree tree(pts);
  return dbscan(pts, params, tree);
}

std::vector<Vec3> blob(std::mt19937_64& rng, Vec3 c, double sigma, int n) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) out.push_back({c.x + g(rng), c.y + g(rng), c.z + g(rng)});
  return out;
}

TEST(Dbscan, SparsePointsAreNoise) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({i * 10.0, 0, 0});
  const auto labels = run(pts, {0.7, 2});
  EXPECT_EQ(labels.cluster_count, 0);
  for (auto l : labels.labels) EXPECT_EQ(l, ClusterLabels::kNoise);
}

TEST(Dbscan, EmptyInput) {
  const auto labels = run({}, {});
  EXPECT_EQ(labels.cluster_count, 0);
  EXPECT_TRUE(labels.labels.empty());
}

TEST(Dbscan, TwoSeparatedBlobs) {
  std::mt19937_64 rng(1);
  auto pts = blob(rng, {0, 0, 0}, 0.2, 60);
  const auto second = blob(rng, {10, 0, 0}, 0.2, 60);
  pts.insert(pts.end(), second.begin(), second.end());
  pts.push_back({5, 5, 5});
  const auto labels = run(pts, {0.7, 5});
  EXPECT_EQ(labels.cluster_count, 2);
  for (int i = 0; i < 60; ++i) EXPECT_EQ(labels.labels[static_cast<std::size_t>(i)], 0);
  for (int i = 60; i < 120; ++i) EXPECT_EQ(labels.labels[static_cast<std::size_t>(i)], 1);
  EXPECT_EQ(labels.labels.back(), ClusterLabels::kNoise);
}

TEST(Dbscan, MatchesReferenceImplementation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    std::uniform_int_distribution<int> k(1, 5);
    std::vector<Vec3> pts;
    const int n_blobs = k(rng);
    for (int b = 0; b < n_blobs; ++b) {
      const auto part = blob(rng, {u(rng), u(rng), 0}, 0.4, 40);
      pts.insert(pts.end(), part.begin(), part.end());
    }
    for (int i = 0; i < 50; ++i) pts.push_back({u(rng), u(rng), u(rng) / 4});
    std::shuffle(pts.begin(), pts.end(), rng);
    const ClusteringParams params{0.7, 6};
    const auto labels = run(pts, params);
    EXPECT_EQ(oracle::canonical(labels.labels),
              oracle::canonical(oracle::reference_dbscan(pts, params.eps, params.min_points)))
        << "seed " << seed;
    EXPECT_EQ(labels.labels, dbscan_linear_scan(pts, params).labels);
  }
}

TEST(Dbscan, EveryClusterHasACorePoint) {
  std::mt19937_64 rng(5);
  auto pts = blob(rng, {0, 0, 0}, 0.8, 150);
  const auto labels = run(pts, {0.5, 8});
  std::vector<bool> has_core(static_cast<std::size_t>(labels.cluster_count), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (labels.labels[i] >= 0 && labels.core[i]) has_core[static_cast<std::size_t>(labels.labels[i])] = true;
    if (labels.core[i]) EXPECT_GE(labels.labels[i], 0);
  }
  for (bool b : has_core) EXPECT_TRUE(b);
  std::size_t total = 0;
  for (const auto& m : labels.members()) total += m.size();
  std::size_t noise = 0;
  for (auto l : labels.labels) noise += l == ClusterLabels::kNoise ? 1 : 0;
  EXPECT_EQ(total + noise, pts.size());
}

TEST(Dbscan, Deterministic) {
  std::mt19937_64 rng(6);
  const auto pts = blob(rng, {0, 0, 0}, 1.0, 300);
  const auto a = run(pts, {0.6, 5});
  const auto b = run(pts, {0.6, 5});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.core, b.core);
}

TEST(Dbscan, SizeMismatchThrows) {
  const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}};
  const KdTree tree(std::vector<Vec3>{{0, 0, 0}});
  EXPECT_THROW(dbscan(pts, ClusteringParams{}, tree), std::invalid_argument);
}

TEST(Dbscan, ParamValidation) {
  EXPECT_THROW((ClusteringParams{0.0, 5}.validate()), ConfigError);
  EXPECT_THROW((ClusteringParams{1.0, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((ClusteringParams{1.0, 1}.validate()));
}

}  // namespace
}  // namespace lidartrack
