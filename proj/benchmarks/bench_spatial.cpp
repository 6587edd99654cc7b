#include <benchmark/benchmark.h>

#include <random>

#include "lidartrack/dbscan.hpp"
#include "lidartrack/kd_tree.hpp"

namespace {

using lidartrack::Vec3;

std::vector<Vec3> uniform_cloud(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xy(0.0, 60.0);
  std::uniform_real_distribution<double> z(0.0, 3.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = {xy(rng), xy(rng), z(rng)};
  return pts;
}

void BM_KdTreeBuild(benchmark::State& state) {
  const auto pts = uniform_cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    lidartrack::KdTree tree(pts);
    benchmark::DoNotOptimize(tree.depth());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KdTreeBuild)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_KdTreeRadiusQuery(benchmark::State& state) {
  const auto pts = uniform_cloud(static_cast<std::size_t>(state.range(0)));
  const lidartrack::KdTree tree(pts);
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (auto _ : state) {
    tree.radius_query_unsorted(pts[i++ % pts.size()], 0.7, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_KdTreeRadiusQuery)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_DbscanKdTree(benchmark::State& state) {
  const auto pts = uniform_cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const lidartrack::KdTree tree(pts);
    benchmark::DoNotOptimize(lidartrack::dbscan(pts, {}, tree).cluster_count);
  }
}
BENCHMARK(BM_DbscanKdTree)->Arg(2000)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_DbscanLinearScan(benchmark::State& state) {
  const auto pts = uniform_cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lidartrack::dbscan_linear_scan(pts, {}).cluster_count);
  }
}
BENCHMARK(BM_DbscanLinearScan)->Arg(2000)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
