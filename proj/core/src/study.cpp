#include "nhppclust/study.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "nhppclust/parallel.hpp"
#include "nhppclust/rng.hpp"

namespace nhppclust {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<double> half_step_grid(double last) {
  std::vector<double> grid;
  for (int i = 0; i <= static_cast<int>(std::lround(2.0 * last)); ++i) {
    grid.push_back(0.5 * i);
  }
  return grid;
}

}  // namespace

std::vector<double> default_eta_grid_simulation() { return half_step_grid(8.0); }

std::vector<double> default_eta_grid_shotchart() { return half_step_grid(7.0); }

FitOutcome fit_one(const BinnedPattern& binned, const NeighborGraph& graph,
                   Hyperparams hyper, double eta, const SamplerConfig& config,
                   Model model, const MfmConfig& mfm) {
  const auto start = std::chrono::steady_clock::now();
  Chain chain;
  if (model == Model::mrf_dpm) {
    hyper.eta = eta;
    chain = run_chain(binned, graph, hyper, config);
  } else {
    chain = run_mfm_chain(binned, mfm, hyper, config);
  }
  const double elapsed = seconds_since(start);
  FitOutcome outcome{summarize_chain(chain, binned, model, eta),
                     std::move(chain), elapsed};
  return outcome;
}

std::vector<FitReport> fit_eta_grid(
    const BinnedPattern& binned, const NeighborGraph& graph, Hyperparams hyper,
    const std::vector<double>& eta_grid, const SamplerConfig& config,
    unsigned threads,
    const std::function<void(std::size_t, const FitOutcome&)>& chain_sink) {
  if (eta_grid.empty()) {
    throw std::invalid_argument("eta grid must not be empty");
  }
  std::vector<std::optional<FitReport>> slots(eta_grid.size());
  std::mutex sink_mutex;
  parallel_for(eta_grid.size(), threads, [&](std::size_t i) {
    SamplerConfig chain_config = config;
    chain_config.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(i)});
    FitOutcome outcome = fit_one(binned, graph, hyper, eta_grid[i], chain_config,
                                 Model::mrf_dpm);
    if (chain_sink) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      chain_sink(i, outcome);
    }
    slots[i].emplace(std::move(outcome.report));
  });
  std::vector<FitReport> reports;
  reports.reserve(slots.size());
  for (auto& slot : slots) reports.push_back(std::move(*slot));
  return reports;
}

namespace {

// One fitted chain scored against the simulation truth.
struct ScoredFit {
  FitReport report;
  double ri_dahl = 0.0;
  double ri_mean = 0.0;
  double mean_abs_rel_bias = 0.0;
  double runtime_sec = 0.0;
};

ScoredFit score_fit(FitOutcome outcome, const std::vector<int>& z_true,
                    const std::vector<double>& lambda_true) {
  ScoredFit scored{std::move(outcome.report), 0.0, 0.0, 0.0, outcome.runtime_sec};
  scored.ri_dahl = rand_index(scored.report.z_hat, z_true);
  double ri_sum = 0.0;
  for (const ChainSample& sample : outcome.chain.samples) {
    ri_sum += rand_index(sample.z, z_true);
  }
  scored.ri_mean = ri_sum / static_cast<double>(outcome.chain.samples.size());
  double bias_sum = 0.0;
  for (std::size_t b = 0; b < lambda_true.size(); ++b) {
    bias_sum += std::abs(scored.report.posterior_mean_lambda[b] - lambda_true[b]) /
                lambda_true[b];
  }
  scored.mean_abs_rel_bias = bias_sum / static_cast<double>(lambda_true.size());
  return scored;
}

SelectionResult to_selection(const ScoredFit& fit) {
  SelectionResult out;
  out.eta = fit.report.eta;
  out.k_hat = fit.report.k_hat;
  out.ri_dahl = fit.ri_dahl;
  out.ri_mean = fit.ri_mean;
  out.mean_abs_rel_bias = fit.mean_abs_rel_bias;
  out.runtime_sec = fit.runtime_sec;
  return out;
}

StudyAggregate aggregate(const std::vector<ReplicateResult>& replicates,
                         const std::function<const SelectionResult&(
                             const ReplicateResult&)>& pick,
                         int true_k) {
  StudyAggregate agg;
  if (replicates.empty()) return agg;
  const double n = static_cast<double>(replicates.size());
  for (const ReplicateResult& rep : replicates) {
    const SelectionResult& sel = pick(rep);
    if (sel.k_hat == true_k) agg.k_accuracy += 1.0;
    agg.mean_ri += sel.ri_mean;
    agg.mean_ri_dahl += sel.ri_dahl;
    agg.mean_abs_rel_bias += sel.mean_abs_rel_bias;
  }
  agg.k_accuracy /= n;
  agg.mean_ri /= n;
  agg.mean_ri_dahl /= n;
  agg.mean_abs_rel_bias /= n;
  return agg;
}

}  // namespace

StudyReport run_replicates(const SimulationSetting& setting,
                           const StudyConfig& config) {
  if (config.n_reps < 0) {
    throw std::invalid_argument("replicate count must be nonnegative");
  }
  if (config.eta_grid.empty()) {
    throw std::invalid_argument("eta grid must not be empty");
  }
  const IntensitySurface truth_surface = setting.surface();
  const std::vector<int>& z_true = setting.assignment;
  const std::vector<double>& lambda_true = truth_surface.lambda;
  const NeighborGraph graph = rook_neighbors(setting.grid);
  const std::size_t n_eta = config.eta_grid.size();
  const std::size_t reps = static_cast<std::size_t>(config.n_reps);

  // Simulation happens up front so chain scheduling cannot affect the data.
  std::vector<BinnedPattern> binned;
  binned.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const PointPattern pattern = simulate_nhpp(
        truth_surface, derive_seed(config.seed, {static_cast<std::uint64_t>(r)}));
    binned.push_back(bin_points(pattern, setting.grid));
  }

  const std::size_t per_rep = n_eta + (config.run_mfm ? 1 : 0);
  std::vector<std::optional<ScoredFit>> cells(reps * per_rep);
  parallel_for(reps * per_rep, config.threads, [&](std::size_t w) {
    const std::size_t r = w / per_rep;
    const std::size_t j = w % per_rep;
    SamplerConfig chain_config = config.chain;
    chain_config.seed = derive_seed(
        config.seed,
        {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(j)});
    try {
      FitOutcome outcome =
          j < n_eta
              ? fit_one(binned[r], graph, config.hyper, config.eta_grid[j],
                        chain_config, Model::mrf_dpm)
              : fit_one(binned[r], graph, config.hyper, 0.0, chain_config,
                        Model::mfm, config.mfm);
      cells[w].emplace(score_fit(std::move(outcome), z_true, lambda_true));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "replicate " << (r + 1) << ": " << e.what();
      throw std::runtime_error(msg.str());
    }
  });

  StudyReport report;
  report.setting_name = setting.name;
  report.true_k = setting.component_count();
  report.n_reps = config.n_reps;
  report.eta_grid = config.eta_grid;
  report.replicates.reserve(reps);

  for (std::size_t r = 0; r < reps; ++r) {
    std::vector<FitReport> fits;
    fits.reserve(n_eta);
    for (std::size_t j = 0; j < n_eta; ++j) {
      fits.push_back(cells[r * per_rep + j]->report);
    }
    const auto scored_at = [&](double eta) -> const ScoredFit& {
      for (std::size_t j = 0; j < n_eta; ++j) {
        if (config.eta_grid[j] == eta) return *cells[r * per_rep + j];
      }
      throw std::logic_error("selected eta not on the grid");
    };
    ReplicateResult rep;
    rep.replicate = static_cast<int>(r) + 1;
    rep.point_count = binned[r].total;
    rep.bic = to_selection(scored_at(select_eta(fits, Criterion::bic)));
    rep.dic = to_selection(scored_at(select_eta(fits, Criterion::dic)));
    rep.lpml = to_selection(scored_at(select_eta(fits, Criterion::lpml)));
    // The plain CRP fit: smallest eta on the grid (0 on the default grids).
    std::size_t base = 0;
    for (std::size_t j = 1; j < n_eta; ++j) {
      if (config.eta_grid[j] < config.eta_grid[base]) base = j;
    }
    rep.eta_zero = to_selection(*cells[r * per_rep + base]);
    if (config.run_mfm) {
      rep.mfm = to_selection(*cells[r * per_rep + n_eta]);
    }
    report.replicates.push_back(std::move(rep));
  }

  report.bic = aggregate(
      report.replicates,
      [](const ReplicateResult& rep) -> const SelectionResult& { return rep.bic; },
      report.true_k);
  report.dic = aggregate(
      report.replicates,
      [](const ReplicateResult& rep) -> const SelectionResult& { return rep.dic; },
      report.true_k);
  report.lpml = aggregate(
      report.replicates,
      [](const ReplicateResult& rep) -> const SelectionResult& { return rep.lpml; },
      report.true_k);
  report.eta_zero = aggregate(
      report.replicates,
      [](const ReplicateResult& rep) -> const SelectionResult& {
        return rep.eta_zero;
      },
      report.true_k);
  if (config.run_mfm) {
    report.mfm = aggregate(
        report.replicates,
        [](const ReplicateResult& rep) -> const SelectionResult& {
          return *rep.mfm;
        },
        report.true_k);
  }
  return report;
}

}  // namespace nhppclust
