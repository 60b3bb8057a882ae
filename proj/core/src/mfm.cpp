#include "nhppclust/mfm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nhppclust/inference.hpp"
#include "nhppclust/rng.hpp"
#include "sampler_detail.hpp"

namespace nhppclust {

void MfmConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("dirichlet weight gamma must be positive");
  }
}

namespace {

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::vector<double> compute_log_vn(int n, int t_max, double gamma) {
  if (n < 1 || t_max < 1 || t_max > n) {
    throw std::invalid_argument("log V_n(t) requires 1 <= t_max <= n");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("dirichlet weight gamma must be positive");
  }
  // log p_K(k) = c0 - lgamma(k + 1); the lgamma(k + 1) of the prior cancels
  // the falling factorial's lgamma(k + 1), leaving
  //   log term(k) = c0 - lgamma(k - t + 1) + lgamma(gamma k) - lgamma(gamma k + n).
  const double c0 = -1.0 - std::log1p(-std::exp(-1.0));
  constexpr double rel_tol_log = -37.0;  // log(1e-16), with a little slack
  // out[t] = log V_n(t); slot 0 is unused.
  std::vector<double> out(static_cast<std::size_t>(t_max) + 1,
                          -std::numeric_limits<double>::infinity());
  for (int t = 1; t <= t_max; ++t) {
    double log_sum = -std::numeric_limits<double>::infinity();
    double prev_term = std::numeric_limits<double>::infinity();
    for (int k = t; k - t <= 500000; ++k) {
      const double gk = gamma * static_cast<double>(k);
      const double log_term = c0 - std::lgamma(static_cast<double>(k - t) + 1.0) +
                              std::lgamma(gk) - std::lgamma(gk + n);
      log_sum = log_add_exp(log_sum, log_term);
      if (k > t && log_term < prev_term && log_term - log_sum < rel_tol_log) {
        break;
      }
      prev_term = log_term;
    }
    out[static_cast<std::size_t>(t)] = log_sum;
  }
  return out;
}

Chain run_mfm_chain(const BinnedPattern& binned, const MfmConfig& config,
                    const Hyperparams& hyper, const SamplerConfig& chain_config) {
  config.validate();
  hyper.validate();
  chain_config.validate();
  const std::size_t n = binned.counts.size();
  if (n == 0) {
    throw std::invalid_argument("cannot run the sampler on an empty grid");
  }
  std::mt19937_64 rng = make_rng(chain_config.seed);

  SamplerState state;
  state.z.assign(n, 0);
  int init_k = 1;
  if (chain_config.init == InitPolicy::random_labels) {
    std::uniform_int_distribution<int> pick_label(0, chain_config.init_clusters - 1);
    for (int& label : state.z) label = pick_label(rng);
    std::vector<int> remap(static_cast<std::size_t>(chain_config.init_clusters), -1);
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
  const double log_gamma_weight = std::log(config.gamma);
  // log V_n(t) for every cluster count the chain can reach. With one box
  // detached at most n - 1 clusters remain, so t + 1 <= n always.
  const std::vector<double> log_vn =
      compute_log_vn(static_cast<int>(n), static_cast<int>(n), config.gamma);
  // Chain-constant part of the new-cluster weight.
  std::vector<double> log_new_marginal(n);
  for (std::size_t box = 0; box < n; ++box) {
    log_new_marginal[box] = log_gamma_weight +
        log_marginal_count(binned.counts[box], mu, hyper.a, hyper.b);
  }

  std::vector<double> w;
  const long total = chain_config.total_sweeps();
  Chain chain;
  chain.ri_trace.reserve(static_cast<std::size_t>(total));
  chain.k_trace.reserve(static_cast<std::size_t>(total));
  chain.samples.reserve(
      static_cast<std::size_t>(chain_config.retained / chain_config.thin));
  std::vector<int> prev_z = state.z;

  for (long sweep = 1; sweep <= total; ++sweep) {
    sample_lambda(state, binned, hyper, rng);
    for (std::size_t box = 0; box < n; ++box) {
      detail::detach_box(static_cast<int>(box), state, binned, nullptr);
      const int k = state.cluster_count();
      if (static_cast<int>(w.size()) < k + 1) {
        w.resize(static_cast<std::size_t>(k) + 1);
      }
      const double count = static_cast<double>(binned.counts[box]);
      for (int c = 0; c < k; ++c) {
        const std::size_t ci = static_cast<std::size_t>(c);
        const double lam_mu = state.lambda[ci] * mu;
        w[ci] = std::log(static_cast<double>(state.cluster_boxes[ci]) +
                         config.gamma) +
                count * std::log(lam_mu) - lam_mu;
      }
      if (k == 0) {
        w[0] = 0.0;  // no clusters left: the box opens a new one surely
      } else {
        w[static_cast<std::size_t>(k)] =
            log_new_marginal[box] + log_vn[static_cast<std::size_t>(k) + 1] -
            log_vn[static_cast<std::size_t>(k)];
      }
      const int pick = detail::pick_index(w, k + 1, rng);
      if (pick == k) {
        detail::instantiate_cluster(static_cast<int>(box), state, binned, hyper,
                                    rng, nullptr);
      }
      detail::attach_box(static_cast<int>(box), pick, state, binned);
    }
    chain.ri_trace.push_back(rand_index(prev_z, state.z));
    chain.k_trace.push_back(state.cluster_count());
    prev_z = state.z;
    if (sweep > chain_config.burn_in &&
        (sweep - chain_config.burn_in) % chain_config.thin == 0) {
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
