#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "nhppclust/grid.hpp"
#include "nhppclust/rng.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"
#include "oracles.hpp"

using namespace nhppclust;

namespace {

// 2x2 unit-box grid with counts (3, 1, 2, 0); z = (0,0,1,1), lambda = (3, 2).
struct TwoByTwo {
  Grid grid = build_grid(StudyRegion{0.0, 2.0, 0.0, 2.0}, 2, 2);
  BinnedPattern binned{grid, {3, 1, 2, 0}, 6};
  NeighborGraph graph = rook_neighbors(grid);
  SamplerState state;

  TwoByTwo() {
    state.z = {0, 0, 1, 1};
    state.lambda = {3.0, 2.0};
    state.rebuild(binned);
  }
};

BinnedPattern simulated_bins(int n_x, int n_y, double scale, std::uint64_t seed) {
  const Grid grid = build_grid(
      StudyRegion{0.0, static_cast<double>(n_x), 0.0, static_cast<double>(n_y)},
      n_x, n_y);
  std::vector<double> lambda(static_cast<std::size_t>(grid.size()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (double& v : lambda) v = scale * u(rng);
  return bin_points(simulate_nhpp(IntensitySurface(grid, lambda), seed + 1), grid);
}

}  // namespace

TEST_CASE("hyperparameter and chain-config validation") {
  Hyperparams h;
  CHECK_NOTHROW(h.validate());
  h.a = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.b = -1.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.alpha = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.eta = -0.5;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.eta = 0.0;
  CHECK_NOTHROW(h.validate());

  SamplerConfig c;
  CHECK_NOTHROW(c.validate());
  c.burn_in = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.retained = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.thin = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.init = InitPolicy::random_labels;
  c.init_clusters = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("state rebuild validates compact labels and tallies bookkeeping") {
  TwoByTwo f;
  CHECK(f.state.cluster_boxes == std::vector<long>{2, 2});
  CHECK(f.state.cluster_points == std::vector<long>{4, 2});
  CHECK(f.state.cluster_area == std::vector<double>{2.0, 2.0});

  SamplerState bad;
  bad.z = {0, 0, 2, 2};
  bad.lambda = {1.0, 1.0, 1.0};  // cluster 1 empty
  CHECK_THROWS_AS(bad.rebuild(f.binned), std::logic_error);
  bad.z = {0, 0, 1, 5};
  bad.lambda = {1.0, 1.0};
  CHECK_THROWS_AS(bad.rebuild(f.binned), std::logic_error);
}

TEST_CASE("closed-form marginal of a cluster's count") {
  // N = 0, unit area, a = b = 1: integral of e^-lambda * e^-lambda = 1/2.
  CHECK(log_marginal_count(0, 1.0, 1.0, 1.0) == doctest::Approx(-std::log(2.0)));
  // N = 5: Gamma(6) / 2^6 = 120 / 64.
  CHECK(log_marginal_count(5, 1.0, 1.0, 1.0) ==
        doctest::Approx(std::log(120.0 / 64.0)));
  // General point checked against adaptive quadrature of the integrand.
  const long n = 7;
  const double a = 2.5, b = 0.5, mu = 3.0;
  const double direct = oracle::integrate(
      [&](double lam) {
        return std::pow(lam * mu, static_cast<double>(n)) * std::exp(-lam * mu) *
               std::pow(b, a) * std::pow(lam, a - 1.0) * std::exp(-b * lam) /
               std::tgamma(a);
      },
      0.0, 60.0, 1e-13);
  CHECK(log_marginal_count(n, mu, a, b) ==
        doctest::Approx(std::log(direct)).epsilon(1e-9));
}

TEST_CASE("existing-cluster weight: occupancy, spatial bonus, likelihood") {
  TwoByTwo f;
  Hyperparams hyper;
  hyper.eta = 1.0;

  // Box 0 (count 3) joining cluster 1 (lambda 2): occupancy 2, one of its
  // neighbors (box 2) sits in cluster 1.
  CHECK(log_weight_existing(0, 1, f.state, f.binned, f.graph, hyper) ==
        doctest::Approx(std::log(2.0) + 1.0 + 3.0 * std::log(2.0) - 2.0));

  // Box 0 staying in cluster 0 (lambda 3): occupancy excludes the box
  // itself, neighbor box 1 shares the cluster.
  CHECK(log_weight_existing(0, 0, f.state, f.binned, f.graph, hyper) ==
        doctest::Approx(0.0 + 1.0 + 3.0 * std::log(3.0) - 3.0));

  // Doubling eta doubles only the spatial term.
  Hyperparams twice = hyper;
  twice.eta = 2.0;
  CHECK(log_weight_existing(0, 1, f.state, f.binned, f.graph, twice) -
            log_weight_existing(0, 1, f.state, f.binned, f.graph, hyper) ==
        doctest::Approx(1.0));
}

TEST_CASE("new-cluster weight is log alpha plus the count marginal") {
  TwoByTwo f;
  Hyperparams hyper;
  hyper.alpha = 2.5;
  CHECK(log_weight_new(0, f.binned, hyper) ==
        doctest::Approx(std::log(2.5) + log_marginal_count(3, 1.0, 1.0, 1.0)));
  CHECK(log_weight_new(3, f.binned, hyper) ==
        doctest::Approx(std::log(2.5) - std::log(2.0)));
}

TEST_CASE("eta = 0 drops the spatial term exactly") {
  TwoByTwo f;
  Hyperparams flat;
  flat.eta = 0.0;
  for (int box = 0; box < 4; ++box) {
    for (int cluster = 0; cluster < 2; ++cluster) {
      const long occupancy =
          f.state.cluster_boxes[static_cast<std::size_t>(cluster)] -
          (f.state.z[static_cast<std::size_t>(box)] == cluster ? 1 : 0);
      if (occupancy == 0) continue;
      const double lam = f.state.lambda[static_cast<std::size_t>(cluster)];
      const double n_pts =
          static_cast<double>(f.binned.counts[static_cast<std::size_t>(box)]);
      const double reference = std::log(static_cast<double>(occupancy)) +
                               n_pts * std::log(lam * 1.0) - lam * 1.0;
      const double got =
          log_weight_existing(box, cluster, f.state, f.binned, f.graph, flat);
      CHECK(oracle::ulp_distance(got, reference) <= 4);
    }
  }
}

TEST_CASE("weights stay finite at extreme counts and intensities") {
  const Grid grid = build_grid(StudyRegion{0.0, 2.0, 0.0, 1.0}, 2, 1);
  const BinnedPattern binned(grid, {1000000, 0}, 1000000);
  const NeighborGraph graph = rook_neighbors(grid);
  Hyperparams hyper;
  hyper.eta = 1.0;
  for (double lam : {1e-12, 1.0, 1e12}) {
    SamplerState state;
    state.z = {0, 1};
    state.lambda = {lam, lam};
    state.rebuild(binned);
    const double w = log_weight_existing(0, 1, state, binned, graph, hyper);
    CHECK(std::isfinite(w));
  }
  CHECK(std::isfinite(log_weight_new(0, binned, hyper)));
}

TEST_CASE("label updates keep bookkeeping and compaction intact") {
  BinnedPattern binned = simulated_bins(3, 3, 3.0, 11);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  hyper.eta = 0.5;
  SamplerState state;
  state.z.assign(static_cast<std::size_t>(binned.grid.size()), 0);
  state.lambda = {1.0};
  state.rebuild(binned);
  std::mt19937_64 rng = make_rng(5);
  for (int pass = 0; pass < 200; ++pass) {
    sample_lambda(state, binned, hyper, rng);
    for (int box = 0; box < binned.grid.size(); ++box) {
      const int label = sample_z(box, state, binned, graph, hyper, rng);
      CHECK(label == state.z[static_cast<std::size_t>(box)]);
      SamplerState checked = state;
      checked.rebuild(binned);  // throws if labels are not compact
      CHECK(checked.cluster_boxes == state.cluster_boxes);
      CHECK(checked.cluster_points == state.cluster_points);
      CHECK(checked.cluster_area == state.cluster_area);
      CHECK(state.lambda.size() == state.cluster_boxes.size());
    }
  }
}

TEST_CASE("intensity updates draw from the conditional gamma") {
  TwoByTwo f;
  Hyperparams hyper;
  hyper.a = 2.0;
  hyper.b = 0.5;
  std::mt19937_64 rng = make_rng(17);
  const int draws = 20000;
  double sum0 = 0.0, sq0 = 0.0;
  for (int i = 0; i < draws; ++i) {
    sample_lambda(f.state, f.binned, hyper, rng);
    sum0 += f.state.lambda[0];
    sq0 += f.state.lambda[0] * f.state.lambda[0];
  }
  // Cluster 0: 4 points over area 2 -> Gamma(6, 2.5).
  const double shape = 4 + 2.0, rate = 0.5 + 2.0;
  const double mean = shape / rate, var = shape / (rate * rate);
  const double got_mean = sum0 / draws;
  const double got_var = sq0 / draws - got_mean * got_mean;
  CHECK(std::abs(got_mean - mean) <= 4.0 * std::sqrt(var / draws));
  const double kurt = 6.0 / shape;
  CHECK(std::abs(got_var - var) <=
        4.0 * var * std::sqrt(2.0 / (draws - 1) + kurt / draws));
}

TEST_CASE("retention bookkeeping: burn-in, thinning, sweep numbering") {
  BinnedPattern binned = simulated_bins(3, 3, 2.0, 23);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  SamplerConfig config;
  config.burn_in = 7;
  config.retained = 13;
  config.thin = 5;
  config.seed = 3;
  const Chain chain = run_chain(binned, graph, hyper, config);
  CHECK(chain.ri_trace.size() == 20);
  CHECK(chain.k_trace.size() == 20);
  REQUIRE(chain.samples.size() == 2);  // floor(13 / 5)
  CHECK(chain.samples[0].iteration == 12);
  CHECK(chain.samples[1].iteration == 17);
  for (const ChainSample& s : chain.samples) {
    CHECK(s.z.size() == 9);
    CHECK(s.lambda.size() ==
          static_cast<std::size_t>(oracle::cluster_count(s.z)));
    CHECK(s.ri_to_previous >= 0.0);
    CHECK(s.ri_to_previous <= 1.0);
  }
}

TEST_CASE("full chain equals a hand-rolled lambda/label sweep loop bitwise") {
  BinnedPattern binned = simulated_bins(4, 4, 4.0, 31);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  hyper.eta = 1.5;
  hyper.alpha = 0.8;
  SamplerConfig config;
  config.burn_in = 20;
  config.retained = 30;
  config.thin = 3;
  config.seed = 77;
  const Chain chain = run_chain(binned, graph, hyper, config);

  // Replay with the public single-step updates and the same seed.
  std::mt19937_64 rng = make_rng(config.seed);
  SamplerState state;
  state.z.assign(static_cast<std::size_t>(binned.grid.size()), 0);
  state.lambda = {1.0};
  state.rebuild(binned);
  sample_lambda(state, binned, hyper, rng);
  std::size_t next = 0;
  for (long sweep = 1; sweep <= config.total_sweeps(); ++sweep) {
    sample_lambda(state, binned, hyper, rng);
    for (int box = 0; box < binned.grid.size(); ++box) {
      sample_z(box, state, binned, graph, hyper, rng);
    }
    CHECK(chain.k_trace[static_cast<std::size_t>(sweep - 1)] ==
          state.cluster_count());
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thin == 0) {
      REQUIRE(next < chain.samples.size());
      const ChainSample& kept = chain.samples[next++];
      CHECK(kept.iteration == sweep);
      CHECK(kept.z == state.z);
      REQUIRE(kept.lambda.size() == state.lambda.size());
      for (std::size_t c = 0; c < state.lambda.size(); ++c) {
        CHECK(kept.lambda[c] == state.lambda[c]);
      }
    }
  }
  CHECK(next == chain.samples.size());
}

TEST_CASE("runtime invariant checking and random initialization run clean") {
  BinnedPattern binned = simulated_bins(4, 4, 3.0, 41);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  hyper.eta = 1.0;
  SamplerConfig config;
  config.burn_in = 10;
  config.retained = 20;
  config.thin = 2;
  config.seed = 9;
  config.check_invariants = true;
  config.init = InitPolicy::random_labels;
  config.init_clusters = 5;
  const Chain chain = run_chain(binned, graph, hyper, config);
  CHECK(chain.samples.size() == 10);
}

TEST_CASE("chains with identical seeds agree; different seeds diverge") {
  BinnedPattern binned = simulated_bins(4, 4, 3.0, 53);
  const NeighborGraph graph = rook_neighbors(binned.grid);
  Hyperparams hyper;
  SamplerConfig config;
  config.burn_in = 5;
  config.retained = 10;
  config.thin = 1;
  config.seed = 1234;
  const Chain a = run_chain(binned, graph, hyper, config);
  const Chain b = run_chain(binned, graph, hyper, config);
  config.seed = 1235;
  const Chain c = run_chain(binned, graph, hyper, config);
  REQUIRE(a.samples.size() == b.samples.size());
  bool all_equal = true;
  bool differs_somewhere = false;
  for (std::size_t s = 0; s < a.samples.size(); ++s) {
    all_equal = all_equal && a.samples[s].z == b.samples[s].z;
    differs_somewhere = differs_somewhere || a.samples[s].z != c.samples[s].z ||
                        a.samples[s].lambda != c.samples[s].lambda;
  }
  CHECK(all_equal);
  CHECK(differs_somewhere);
}

TEST_CASE("seed stream derivation separates paths") {
  CHECK(derive_seed(1, {0}) != derive_seed(1, {1}));
  CHECK(derive_seed(1, {1, 2}) != derive_seed(1, {2, 1}));
  CHECK(derive_seed(1, {1}) != derive_seed(2, {1}));
  CHECK(derive_seed(7, {3, 4}) == derive_seed(7, {3, 4}));
}
