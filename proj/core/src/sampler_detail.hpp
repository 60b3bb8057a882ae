// Internal helpers shared by the two collapsed Gibbs samplers. Not installed.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/sampler.hpp"

namespace nhppclust::detail {

constexpr int kDetached = -1;

// Per-sweep values of lambda_c * mu and its log; kept in step with cluster
// creation and deletion so cached weights match log_weight_existing exactly.
struct ClusterCache {
  std::vector<double> lam_mu;
  std::vector<double> log_lam_mu;
};

// Removes `box` from its cluster. An emptied cluster is deleted by moving
// the last label into its slot, keeping labels dense.
inline void detach_box(int box, SamplerState& state, const BinnedPattern& binned,
                       ClusterCache* cache) {
  const std::size_t c =
      static_cast<std::size_t>(state.z[static_cast<std::size_t>(box)]);
  const double mu = binned.grid.box_area();
  state.z[static_cast<std::size_t>(box)] = kDetached;
  state.cluster_boxes[c] -= 1;
  state.cluster_points[c] -= binned.counts[static_cast<std::size_t>(box)];
  state.cluster_area[c] = static_cast<double>(state.cluster_boxes[c]) * mu;
  if (state.cluster_boxes[c] > 0) return;
  const int last = state.cluster_count() - 1;
  if (static_cast<int>(c) != last) {
    for (int& label : state.z) {
      if (label == last) label = static_cast<int>(c);
    }
    const std::size_t l = static_cast<std::size_t>(last);
    state.lambda[c] = state.lambda[l];
    state.cluster_boxes[c] = state.cluster_boxes[l];
    state.cluster_points[c] = state.cluster_points[l];
    state.cluster_area[c] = state.cluster_area[l];
    if (cache) {
      cache->lam_mu[c] = cache->lam_mu[l];
      cache->log_lam_mu[c] = cache->log_lam_mu[l];
    }
  }
  state.lambda.pop_back();
  state.cluster_boxes.pop_back();
  state.cluster_points.pop_back();
  state.cluster_area.pop_back();
  if (cache) {
    cache->lam_mu.pop_back();
    cache->log_lam_mu.pop_back();
  }
}

inline void attach_box(int box, int cluster, SamplerState& state,
                       const BinnedPattern& binned) {
  const std::size_t c = static_cast<std::size_t>(cluster);
  const double mu = binned.grid.box_area();
  state.z[static_cast<std::size_t>(box)] = cluster;
  state.cluster_boxes[c] += 1;
  state.cluster_points[c] += binned.counts[static_cast<std::size_t>(box)];
  state.cluster_area[c] = static_cast<double>(state.cluster_boxes[c]) * mu;
}

inline double draw_gamma(double shape, double rate, std::mt19937_64& rng) {
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

// Single inverse-CDF draw over normalized weights. Overwrites w[0..count)
// with the shifted exponentials; consumes exactly one uniform variate.
inline int pick_index(std::vector<double>& w, int count, std::mt19937_64& rng) {
  double max_w = w[0];
  for (int c = 1; c < count; ++c) {
    if (w[static_cast<std::size_t>(c)] > max_w) {
      max_w = w[static_cast<std::size_t>(c)];
    }
  }
  double total = 0.0;
  for (int c = 0; c < count; ++c) {
    auto& wc = w[static_cast<std::size_t>(c)];
    wc = std::exp(wc - max_w);
    total += wc;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng) * total;
  double cum = 0.0;
  for (int c = 0; c < count; ++c) {
    cum += w[static_cast<std::size_t>(c)];
    if (u <= cum) return c;
  }
  return count - 1;
}

// Opens a fresh cluster for `box` with intensity drawn from its conditional
// Gamma(N + a, b + mu).
inline void instantiate_cluster(int box, SamplerState& state,
                                const BinnedPattern& binned,
                                const Hyperparams& hyper, std::mt19937_64& rng,
                                ClusterCache* cache) {
  const double mu = binned.grid.box_area();
  const double shape =
      static_cast<double>(binned.counts[static_cast<std::size_t>(box)]) + hyper.a;
  const double lambda_new = draw_gamma(shape, hyper.b + mu, rng);
  state.lambda.push_back(lambda_new);
  state.cluster_boxes.push_back(0);
  state.cluster_points.push_back(0);
  state.cluster_area.push_back(0.0);
  if (cache) {
    const double lam_mu = lambda_new * mu;
    cache->lam_mu.push_back(lam_mu);
    cache->log_lam_mu.push_back(std::log(lam_mu));
  }
}

}  // namespace nhppclust::detail
