#pragma once

#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/sampler.hpp"

namespace nhppclust {

/// Mixture-of-finite-mixtures benchmark configuration. The prior on the
/// number of components is Poisson(1) truncated to {1, 2, ...}; gamma is the
/// symmetric Dirichlet weight parameter.
struct MfmConfig {
  double gamma = 1.0;

  void validate() const;
};

/// Coefficients log V_n(t), t = 1..t_max, where
///   V_n(t) = sum_{k >= t} k!/(k-t)! / (gamma*k)^(n) * p_K(k)
/// with (x)^(n) the rising factorial and p_K the truncated Poisson(1) prior.
/// Slot t of the result holds log V_n(t); slot 0 is unused. The series is
/// summed in the log domain and truncated once terms stop contributing at
/// 1e-16 relative precision.
std::vector<double> compute_log_vn(int n, int t_max, double gamma);

/// Collapsed Gibbs sampler for the MFM-NHPP benchmark. Existing clusters are
/// weighted by (n_c(Z_{-i}) + gamma) times the Poisson likelihood; a new
/// cluster by gamma * V_n(t+1)/V_n(t) times the Gamma(a, b) marginal. Lambda
/// updates share sample_lambda() with the MRF-DPM sampler. Only a and b of
/// `hyper` are used.
Chain run_mfm_chain(const BinnedPattern& binned, const MfmConfig& config,
                    const Hyperparams& hyper, const SamplerConfig& chain_config);

}  // namespace nhppclust
