// Microbenchmarks for the hot paths: one Gibbs sweep over the labels, the
// intensity refresh, the partition-count coefficients, the pair-agreement
// index, and the representative-draw scan.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/inference.hpp"
#include "nhppclust/mfm.hpp"
#include "nhppclust/rng.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"

using namespace nhppclust;

namespace {

BinnedPattern benchmark_pattern(int n_x, int n_y) {
  const Grid grid = build_grid(
      StudyRegion{0.0, static_cast<double>(n_x), 0.0, static_cast<double>(n_y)},
      n_x, n_y);
  std::vector<double> lambda(static_cast<std::size_t>(grid.size()));
  std::mt19937_64 rng = make_rng(5150);
  std::uniform_real_distribution<double> level(0.5, 12.0);
  for (double& v : lambda) v = level(rng);
  return bin_points(simulate_nhpp(IntensitySurface(grid, lambda), 5151), grid);
}

void bm_label_sweep(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const BinnedPattern binned = benchmark_pattern(side, side);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  hyper.eta = 1.0;
  SamplerState s;
  s.z.assign(static_cast<std::size_t>(binned.grid.size()), 0);
  s.lambda = {1.0};
  s.rebuild(binned);
  std::mt19937_64 rng = make_rng(99);
  sample_lambda(s, binned, hyper, rng);
  for (auto _ : state) {
    for (int box = 0; box < binned.grid.size(); ++box) {
      sample_z(box, s, binned, graph, hyper, rng);
    }
    benchmark::DoNotOptimize(s.z.data());
  }
  state.SetItemsProcessed(state.iterations() * binned.grid.size());
}
BENCHMARK(bm_label_sweep)->Arg(20)->Arg(50);

void bm_lambda_refresh(benchmark::State& state) {
  const BinnedPattern binned = benchmark_pattern(20, 20);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  SamplerState s;
  s.z.assign(static_cast<std::size_t>(binned.grid.size()), 0);
  s.lambda = {1.0};
  s.rebuild(binned);
  std::mt19937_64 rng = make_rng(100);
  for (int i = 0; i < 20; ++i) {
    sample_lambda(s, binned, hyper, rng);
    for (int box = 0; box < binned.grid.size(); ++box) {
      sample_z(box, s, binned, graph, hyper, rng);
    }
  }
  for (auto _ : state) {
    sample_lambda(s, binned, hyper, rng);
    benchmark::DoNotOptimize(s.lambda.data());
  }
}
BENCHMARK(bm_lambda_refresh);

void bm_log_vn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    std::vector<double> lv = compute_log_vn(n, std::min(n, 40), 1.0);
    benchmark::DoNotOptimize(lv.data());
  }
}
BENCHMARK(bm_log_vn)->Arg(400)->Arg(1750);

void bm_rand_index(benchmark::State& state) {
  std::mt19937_64 rng = make_rng(321);
  std::uniform_int_distribution<int> lab(0, 7);
  std::vector<int> a(400), b(400);
  for (int& v : a) v = lab(rng);
  for (int& v : b) v = lab(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rand_index(a, b));
  }
}
BENCHMARK(bm_rand_index);

void bm_dahl_select(benchmark::State& state) {
  std::mt19937_64 rng = make_rng(654);
  std::uniform_int_distribution<int> lab(0, 4);
  Chain chain;
  for (int s = 0; s < 200; ++s) {
    ChainSample sample;
    sample.iteration = s + 1;
    sample.z.resize(400);
    for (int& v : sample.z) v = lab(rng);
    sample.lambda = {1.0, 1.0, 1.0, 1.0, 1.0};
    chain.samples.push_back(std::move(sample));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(dahl_select(chain));
  }
}
BENCHMARK(bm_dahl_select);

}  // namespace

BENCHMARK_MAIN();
