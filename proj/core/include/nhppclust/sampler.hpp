#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nhppclust/grid.hpp"

namespace nhppclust {

/// Prior and smoothing parameters. The base measure over intensities is
/// Gamma(a, b) (shape, rate); alpha is the Dirichlet-process concentration;
/// eta >= 0 weights spatial homogeneity (eta = 0 drops the spatial term).
struct Hyperparams {
  double a = 1.0;
  double b = 1.0;
  double alpha = 1.0;
  double eta = 0.0;

  void validate() const;
};

enum class InitPolicy {
  single_cluster,  // all boxes in one cluster, lambda drawn from its conditional
  random_labels,   // uniform labels among init_clusters, then compacted
};

struct SamplerConfig {
  long burn_in = 2000;   // B
  long retained = 2000;  // L, post-burn-in sweeps
  long thin = 10;        // keep every thin-th post-burn-in sweep
  std::uint64_t seed = 1;
  InitPolicy init = InitPolicy::single_cluster;
  int init_clusters = 4;        // only for random_labels
  bool check_invariants = false;  // verify label compaction after every sweep

  long total_sweeps() const { return burn_in + retained; }
  void validate() const;
};

/// Current labels and per-cluster intensities. Labels are dense 0..K-1 with
/// every label occupied; lambda[k] is the intensity of cluster k. The
/// cluster_* vectors are bookkeeping kept consistent by the update routines.
struct SamplerState {
  std::vector<int> z;
  std::vector<double> lambda;

  std::vector<long> cluster_boxes;   // boxes per cluster
  std::vector<long> cluster_points;  // observed points per cluster
  std::vector<double> cluster_area;  // total area per cluster

  int cluster_count() const { return static_cast<int>(lambda.size()); }

  /// Rebuilds bookkeeping from z/lambda; throws if labels are not compact.
  void rebuild(const BinnedPattern& binned);
};

struct ChainSample {
  long iteration = 0;  // 1-based sweep number
  std::vector<int> z;
  std::vector<double> lambda;
  double ri_to_previous = 1.0;  // Rand index against the preceding sweep
};

/// Retained draws plus whole-run diagnostics. ri_trace[s] is the Rand index
/// between the labels after sweep s+1 and the labels before it (sweep 0 being
/// the initial state); k_trace[s] is the cluster count after sweep s+1.
struct Chain {
  std::vector<ChainSample> samples;
  std::vector<double> ri_trace;
  std::vector<int> k_trace;
};

/// Log weight (up to the common normalizing constant) for box `box` joining
/// the existing cluster `cluster`:
///   log n_c(Z_{-box}) + eta * sum_{j in neighbors(box)} d_bj 1(z_j = c)
///     + N(A_box) * log(lambda_c * mu) - lambda_c * mu.
/// The box itself is excluded from the occupancy count and `cluster` must
/// remain occupied without it.
double log_weight_existing(int box, int cluster, const SamplerState& state,
                           const BinnedPattern& binned, const NeighborGraph& graph,
                           const Hyperparams& hyper);

/// Log weight for box `box` opening a new cluster, with the intensity
/// integrated out against the Gamma(a, b) base measure:
///   log alpha + a log b + lgamma(N + a) + N log mu
///     - (N + a) log(b + mu) - lgamma(a).
double log_weight_new(int box, const BinnedPattern& binned, const Hyperparams& hyper);

/// The same marginal without the log alpha term (shared with the MFM sampler).
double log_marginal_count(long count, double area, double a, double b);

/// One Gibbs update of z[box]: draws from the normalized weights over
/// existing clusters plus a new one (log-sum-exp with max subtraction). A
/// draw of "new" instantiates lambda from Gamma(N + a, b + mu); clusters
/// emptied by the move are removed and labels compacted. Returns the new label.
int sample_z(int box, SamplerState& state, const BinnedPattern& binned,
             const NeighborGraph& graph, const Hyperparams& hyper,
             std::mt19937_64& rng);

/// Conditional update of every cluster intensity:
/// lambda_k ~ Gamma(N_k + a, b + area_k).
void sample_lambda(SamplerState& state, const BinnedPattern& binned,
                   const Hyperparams& hyper, std::mt19937_64& rng);

/// Collapsed Gibbs sampler for the MRF-constrained DP mixture of NHPPs.
/// Each sweep updates all lambdas, then every z in fixed index order.
/// eta = 0 reduces to the plain CRP-NHPP sampler.
Chain run_chain(const BinnedPattern& binned, const NeighborGraph& graph,
                const Hyperparams& hyper, const SamplerConfig& config);

}  // namespace nhppclust
