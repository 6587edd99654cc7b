#include "lidartrack/kd_tree.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support/oracles.hpp"

namespace lidartrack {
namespace {

std::vector<Vec3> random_cloud(std::mt19937_64& rng, std::size_t n, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng) / 10.0};
  return pts;
}

TEST(KdTree, EmptyTree) {
  const KdTree tree(std::vector<Vec3>{});
  EXPECT_TRUE(tree.empty());
  EXPECT_EQ(tree.depth(), 0u);
  EXPECT_TRUE(tree.radius_query({0, 0, 0}, 100.0).empty());
}

TEST(KdTree, SinglePoint) {
  const std::vector<Vec3> pts = {{1, 2, 3}};
  const KdTree tree(pts);
  EXPECT_EQ(tree.depth(), 1u);
  EXPECT_EQ(tree.radius_query({1, 2, 3}, 0.0), std::vector<std::size_t>{0});
  EXPECT_EQ(tree.radius_query({1, 2, 4}, 1.0), std::vector<std::size_t>{0});
  EXPECT_TRUE(tree.radius_query({1, 2, 4}, 0.999).empty());
}

TEST(KdTree, MatchesLinearScan) {
  std::mt19937_64 rng(11);
  const auto pts = random_cloud(rng, 1000, 20.0);
  const KdTree tree(pts);
  std::uniform_real_distribution<double> u(-22.0, 22.0);
  std::uniform_real_distribution<double> radius(0.0, 6.0);
  for (int q = 0; q < 1000; ++q) {
    // Half the queries are centred on a data point to exercise the boundary.
    const Vec3 c = q % 2 == 0 ? pts[static_cast<std::size_t>(q)] : Vec3{u(rng), u(rng), u(rng) / 10};
    const double r = radius(rng);
    ASSERT_EQ(tree.radius_query(c, r), oracle::radius_scan(pts, c, r)) << "query " << q;
  }
}

TEST(KdTree, BoundaryIsInclusive) {
  const std::vector<Vec3> pts = {{0, 0, 0}, {3, 4, 0}, {0, 0, 5}, {5.000001, 0, 0}};
  const KdTree tree(pts, 1);
  EXPECT_EQ(tree.radius_query({0, 0, 0}, 5.0), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(KdTree, ZeroRadiusReturnsDuplicates) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({double(i % 4), 0, 0});
  const KdTree tree(pts, 2);
  const auto hits = tree.radius_query({2, 0, 0}, 0.0);
  ASSERT_EQ(hits.size(), 10u);
  for (auto i : hits) EXPECT_EQ(i % 4, 2u);
}

TEST(KdTree, LargeRadiusCoversAll) {
  std::mt19937_64 rng(12);
  const auto pts = random_cloud(rng, 300, 5.0);
  const KdTree tree(pts);
  EXPECT_EQ(tree.radius_query({0, 0, 0}, 1e6).size(), pts.size());
}

TEST(KdTree, RejectsBadRadius) {
  const KdTree tree(std::vector<Vec3>{{0, 0, 0}});
  EXPECT_THROW(tree.radius_query({0, 0, 0}, -1.0), std::invalid_argument);
  EXPECT_THROW(tree.radius_query({0, 0, 0}, std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
}

TEST(KdTree, DepthIsLogarithmic) {
  std::mt19937_64 rng(13);
  for (std::size_t n : {17u, 100u, 1000u, 5000u}) {
    const auto pts = random_cloud(rng, n, 10.0);
    const KdTree tree(pts);
    const double bound = std::ceil(std::log2(double(n) / KdTree::kDefaultLeafSize)) + 2;
    EXPECT_LE(double(tree.depth()), bound) << n;
  }
}

TEST(KdTree, DegenerateInputStillBalanced) {
  const std::vector<Vec3> same(2000, Vec3{1, 1, 1});
  const KdTree tree(same);
  EXPECT_LE(tree.depth(), 10u);
  EXPECT_EQ(tree.radius_query({1, 1, 1}, 0.0).size(), 2000u);
}

TEST(KdTree, PermutationCoversEachIndexOnce) {
  std::mt19937_64 rng(14);
  const auto pts = random_cloud(rng, 777, 10.0);
  const KdTree tree(pts, 5);
  std::vector<int> seen(pts.size(), 0);
  for (auto i : tree.permutation()) ++seen[i];
  for (int s : seen) EXPECT_EQ(s, 1);
}

}  // namespace
}  // namespace lidartrack
