#include "nhppclust/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nhppclust/inference.hpp"
#include "nhppclust/rng.hpp"
#include "sampler_detail.hpp"

namespace nhppclust {

void Hyperparams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a) || !(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("gamma base measure requires a > 0 and b > 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("concentration alpha must be positive");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("smoothing weight eta must be nonnegative");
  }
}

void SamplerConfig::validate() const {
  if (burn_in < 0) {
    throw std::invalid_argument("burn-in must be nonnegative");
  }
  if (retained < 1) {
    throw std::invalid_argument("at least one post-burn-in sweep is required");
  }
  if (thin < 1) {
    throw std::invalid_argument("thinning interval must be at least 1");
  }
  if (init == InitPolicy::random_labels && init_clusters < 1) {
    throw std::invalid_argument("random init requires at least one cluster");
  }
}

void SamplerState::rebuild(const BinnedPattern& binned) {
  const int k = cluster_count();
  if (k < 1) throw std::logic_error("state must hold at least one cluster");
  if (z.size() != binned.counts.size()) {
    throw std::logic_error("label vector does not match binned pattern");
  }
  cluster_boxes.assign(static_cast<std::size_t>(k), 0);
  cluster_points.assign(static_cast<std::size_t>(k), 0);
  cluster_area.assign(static_cast<std::size_t>(k), 0.0);
  for (std::size_t box = 0; box < z.size(); ++box) {
    const int label = z[box];
    if (label < 0 || label >= k) {
      throw std::logic_error("cluster label out of range");
    }
    cluster_boxes[static_cast<std::size_t>(label)] += 1;
    cluster_points[static_cast<std::size_t>(label)] += binned.counts[box];
  }
  const double mu = binned.grid.box_area();
  for (int c = 0; c < k; ++c) {
    if (cluster_boxes[static_cast<std::size_t>(c)] == 0) {
      throw std::logic_error("labels are not compact: empty cluster");
    }
    cluster_area[static_cast<std::size_t>(c)] =
        static_cast<double>(cluster_boxes[static_cast<std::size_t>(c)]) * mu;
  }
}

double log_marginal_count(long count, double area, double a, double b) {
  const double n = static_cast<double>(count);
  return a * std::log(b) + std::lgamma(n + a) + n * std::log(area) -
         (n + a) * std::log(b + area) - std::lgamma(a);
}

double log_weight_new(int box, const BinnedPattern& binned,
                      const Hyperparams& hyper) {
  return std::log(hyper.alpha) +
         log_marginal_count(binned.counts[static_cast<std::size_t>(box)],
                            binned.grid.box_area(), hyper.a, hyper.b);
}

double log_weight_existing(int box, int cluster, const SamplerState& state,
                           const BinnedPattern& binned, const NeighborGraph& graph,
                           const Hyperparams& hyper) {
  const std::size_t c = static_cast<std::size_t>(cluster);
  long n = state.cluster_boxes[c];
  if (state.z[static_cast<std::size_t>(box)] == cluster) n -= 1;
  double mrf = 0.0;
  for (const auto& nb : graph.neighbors(box)) {
    if (state.z[static_cast<std::size_t>(nb.index)] == cluster) mrf += nb.weight;
  }
  const double lam_mu = state.lambda[c] * binned.grid.box_area();
  const double count =
      static_cast<double>(binned.counts[static_cast<std::size_t>(box)]);
  return std::log(static_cast<double>(n)) + hyper.eta * mrf +
         count * std::log(lam_mu) - lam_mu;
}

namespace {

// Fast-path z update used by run_chain. Weight arithmetic mirrors
// log_weight_existing / log_weight_new term for term, and randomness is
// consumed in the same order as sample_z, so both paths yield identical
// chains from identical generator states.
int update_z_cached(int box, SamplerState& state, const BinnedPattern& binned,
                    const NeighborGraph& graph, const Hyperparams& hyper,
                    std::mt19937_64& rng, detail::ClusterCache& cache,
                    const std::vector<double>& log_int,
                    const std::vector<double>& log_new,
                    std::vector<double>& w, std::vector<double>& nb_sum) {
  detail::detach_box(box, state, binned, &cache);
  const int k = state.cluster_count();
  if (static_cast<int>(nb_sum.size()) < k) {
    nb_sum.resize(static_cast<std::size_t>(k));
  }
  std::fill(nb_sum.begin(), nb_sum.begin() + k, 0.0);
  for (const auto& nb : graph.neighbors(box)) {
    const int label = state.z[static_cast<std::size_t>(nb.index)];
    if (label >= 0) nb_sum[static_cast<std::size_t>(label)] += nb.weight;
  }
  if (static_cast<int>(w.size()) < k + 1) {
    w.resize(static_cast<std::size_t>(k) + 1);
  }
  const double count =
      static_cast<double>(binned.counts[static_cast<std::size_t>(box)]);
  for (int c = 0; c < k; ++c) {
    const std::size_t ci = static_cast<std::size_t>(c);
    w[ci] = log_int[static_cast<std::size_t>(state.cluster_boxes[ci])] +
            hyper.eta * nb_sum[ci] + count * cache.log_lam_mu[ci] -
            cache.lam_mu[ci];
  }
  w[static_cast<std::size_t>(k)] = log_new[static_cast<std::size_t>(box)];
  const int pick = detail::pick_index(w, k + 1, rng);
  if (pick == k) {
    detail::instantiate_cluster(box, state, binned, hyper, rng, &cache);
  }
  detail::attach_box(box, pick, state, binned);
  return pick;
}

}  // namespace

int sample_z(int box, SamplerState& state, const BinnedPattern& binned,
             const NeighborGraph& graph, const Hyperparams& hyper,
             std::mt19937_64& rng) {
  detail::detach_box(box, state, binned, nullptr);
  const int k = state.cluster_count();
  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  for (int c = 0; c < k; ++c) {
    w[static_cast<std::size_t>(c)] =
        log_weight_existing(box, c, state, binned, graph, hyper);
  }
  w[static_cast<std::size_t>(k)] = log_weight_new(box, binned, hyper);
  const int pick = detail::pick_index(w, k + 1, rng);
  if (pick == k) {
    detail::instantiate_cluster(box, state, binned, hyper, rng, nullptr);
  }
  detail::attach_box(box, pick, state, binned);
  return pick;
}

void sample_lambda(SamplerState& state, const BinnedPattern& binned,
                   const Hyperparams& hyper, std::mt19937_64& rng) {
  (void)binned;
  for (int c = 0; c < state.cluster_count(); ++c) {
    const std::size_t ci = static_cast<std::size_t>(c);
    const double shape = static_cast<double>(state.cluster_points[ci]) + hyper.a;
    state.lambda[ci] =
        detail::draw_gamma(shape, hyper.b + state.cluster_area[ci], rng);
  }
}

Chain run_chain(const BinnedPattern& binned, const NeighborGraph& graph,
                const Hyperparams& hyper, const SamplerConfig& config) {
  hyper.validate();
  config.validate();
  const std::size_t n = binned.counts.size();
  if (n == 0) {
    throw std::invalid_argument("cannot run the sampler on an empty grid");
  }
  if (graph.size() != n) {
    throw std::invalid_argument("neighbor graph does not match the grid");
  }
  std::mt19937_64 rng = make_rng(config.seed);

  SamplerState state;
  state.z.assign(n, 0);
  int init_k = 1;
  if (config.init == InitPolicy::random_labels) {
    std::uniform_int_distribution<int> pick_label(0, config.init_clusters - 1);
    for (int& label : state.z) label = pick_label(rng);
    // Compact: unused labels drop out, used ones keep their relative order.
    std::vector<int> remap(static_cast<std::size_t>(config.init_clusters), -1);
    for (int label : state.z) remap[static_cast<std::size_t>(label)] = 0;
    init_k = 0;
    for (int& slot : remap) {
      if (slot == 0) slot = init_k++;
    }
    for (int& label : state.z) label = remap[static_cast<std::size_t>(label)];
  }
  state.lambda.assign(static_cast<std::size_t>(init_k), 1.0);
  state.rebuild(binned);
  sample_lambda(state, binned, hyper, rng);

  const double mu = binned.grid.box_area();
  std::vector<double> log_int(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    log_int[i] = std::log(static_cast<double>(i));
  }
  std::vector<double> log_new(n);
  for (std::size_t box = 0; box < n; ++box) {
    log_new[box] = log_weight_new(static_cast<int>(box), binned, hyper);
  }
  detail::ClusterCache cache;
  std::vector<double> w;
  std::vector<double> nb_sum;

  const long total = config.total_sweeps();
  Chain chain;
  chain.ri_trace.reserve(static_cast<std::size_t>(total));
  chain.k_trace.reserve(static_cast<std::size_t>(total));
  chain.samples.reserve(static_cast<std::size_t>(config.retained / config.thin));
  std::vector<int> prev_z = state.z;

  for (long sweep = 1; sweep <= total; ++sweep) {
    sample_lambda(state, binned, hyper, rng);
    const std::size_t k = static_cast<std::size_t>(state.cluster_count());
    cache.lam_mu.resize(k);
    cache.log_lam_mu.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
      cache.lam_mu[c] = state.lambda[c] * mu;
      cache.log_lam_mu[c] = std::log(cache.lam_mu[c]);
    }
    for (std::size_t box = 0; box < n; ++box) {
      update_z_cached(static_cast<int>(box), state, binned, graph, hyper, rng,
                      cache, log_int, log_new, w, nb_sum);
    }
    chain.ri_trace.push_back(rand_index(prev_z, state.z));
    chain.k_trace.push_back(state.cluster_count());
    prev_z = state.z;
    if (config.check_invariants) {
      SamplerState checked = state;
      checked.rebuild(binned);
      if (checked.cluster_boxes != state.cluster_boxes ||
          checked.cluster_points != state.cluster_points ||
          checked.cluster_area != state.cluster_area) {
        throw std::logic_error("sampler bookkeeping out of sync");
      }
    }
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thin == 0) {
      ChainSample sample;
      sample.iteration = sweep;
      sample.z = state.z;
      sample.lambda = state.lambda;
      sample.ri_to_previous = chain.ri_trace.back();
      chain.samples.push_back(std::move(sample));
    }
  }
  return chain;
}

}  // namespace nhppclust
