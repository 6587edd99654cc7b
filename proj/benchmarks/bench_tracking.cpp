#include <benchmark/benchmark.h>

#include <random>

#include "lidartrack/hungarian.hpp"
#include "lidartrack/tracker.hpp"

namespace {

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < cost.size(); ++i) cost(i) = u(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lidartrack::hungarian(cost).matches.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_TrackerStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<lidartrack::Detection3D> dets(static_cast<std::size_t>(n));
  lidartrack::Tracker tracker;
  double t = 0.0;
  for (auto _ : state) {
    for (int i = 0; i < n; ++i) dets[static_cast<std::size_t>(i)].center = {10.0 * i + t, 0.0, 0.0};
    benchmark::DoNotOptimize(tracker.step(dets, t).size());
    t += 0.1;
  }
}
BENCHMARK(BM_TrackerStep)->Arg(5)->Arg(20)->Arg(80);

}  // namespace
