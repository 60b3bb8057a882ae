#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/inference.hpp"
#include "nhppclust/mfm.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"

namespace nhppclust {

/// One chain fitted and summarized.
struct FitOutcome {
  FitReport report;
  Chain chain;
  double runtime_sec = 0.0;
};

FitOutcome fit_one(const BinnedPattern& binned, const NeighborGraph& graph,
                   Hyperparams hyper, double eta, const SamplerConfig& config,
                   Model model, const MfmConfig& mfm = {});

/// Runs one chain per eta (in parallel up to `threads`; 0 means hardware
/// concurrency). Chain seeds are derived from config.seed and the eta index.
/// `chain_sink`, when set, receives each finished chain (e.g. to dump it)
/// before it is discarded.
std::vector<FitReport> fit_eta_grid(
    const BinnedPattern& binned, const NeighborGraph& graph, Hyperparams hyper,
    const std::vector<double>& eta_grid, const SamplerConfig& config,
    unsigned threads = 0,
    const std::function<void(std::size_t, const FitOutcome&)>& chain_sink = {});

std::vector<double> default_eta_grid_simulation();  // 0, 0.5, ..., 8
std::vector<double> default_eta_grid_shotchart();   // 0, 0.5, ..., 7

struct StudyConfig {
  int n_reps = 20;
  std::vector<double> eta_grid = default_eta_grid_simulation();
  Hyperparams hyper;      // eta is taken from eta_grid
  SamplerConfig chain;    // chain.seed is ignored; seeds derive from `seed`
  std::uint64_t seed = 1;
  unsigned threads = 0;   // 0 = hardware concurrency
  bool run_mfm = false;   // also fit the MFM benchmark per replicate
  MfmConfig mfm;
};

/// Per-replicate result for one selection rule.
struct SelectionResult {
  double eta = 0.0;
  int k_hat = 0;
  double ri_dahl = 0.0;           // Rand index of the Dahl labels vs truth
  double ri_mean = 0.0;           // mean Rand index of retained draws vs truth
  double mean_abs_rel_bias = 0.0; // mean |posterior-mean lambda - truth|/truth
  double runtime_sec = 0.0;       // runtime of the selected chain
};

struct ReplicateResult {
  int replicate = 0;
  long point_count = 0;
  SelectionResult bic;
  SelectionResult dic;
  SelectionResult lpml;
  SelectionResult eta_zero;           // the eta = 0 fit, no selection
  std::optional<SelectionResult> mfm; // benchmark fit (eta unused)
};

struct StudyAggregate {
  double k_accuracy = 0.0;       // fraction of replicates with k_hat == true K
  double mean_ri = 0.0;          // mean over replicates of ri_mean
  double mean_ri_dahl = 0.0;
  double mean_abs_rel_bias = 0.0;
};

struct StudyReport {
  std::string setting_name;
  int true_k = 0;
  int n_reps = 0;
  std::vector<double> eta_grid;
  std::vector<ReplicateResult> replicates;
  StudyAggregate bic;
  StudyAggregate dic;
  StudyAggregate lpml;
  StudyAggregate eta_zero;
  std::optional<StudyAggregate> mfm;
};

/// Simulation study: per replicate, simulate from the setting's surface,
/// fit the whole eta grid, select eta per criterion, and score against the
/// ground truth. Replicates and chains run in parallel with RNG streams
/// derived from (seed, replicate, eta index). Sampler failures are rethrown
/// with the replicate index attached.
StudyReport run_replicates(const SimulationSetting& setting, const StudyConfig& config);

}  // namespace nhppclust
