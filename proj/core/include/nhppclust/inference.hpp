#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"

namespace nhppclust {

enum class Model { mrf_dpm, mfm };

const char* model_name(Model model);

enum class Criterion { dic, lpml, bic };

const char* criterion_name(Criterion criterion);

/// Proportion of concordant pairs between two clusterings: pairs either
/// together in both or apart in both. 1 means identical partitions. Labels
/// may be arbitrary integers.
double rand_index(std::span<const int> z1, std::span<const int> z2);

/// Index (into chain.samples) of the retained draw whose co-clustering
/// matrix is closest, element-wise, to the posterior mean co-clustering
/// matrix. Ties go to the earliest sample. The mean matrix is accumulated
/// sample by sample and the squared distance expanded per sample, so no
/// per-sample n x n matrices are retained.
std::size_t dahl_select(const Chain& chain);

/// Per-box intensities of one retained draw.
std::vector<double> sample_box_lambda(const ChainSample& sample);

/// -2 [ sum_i log lambda(s_i) - sum_boxes lambda_b * area_b ], with
/// lambda(s_i) the value of the box containing point i.
double deviance(const IntensitySurface& surface, const BinnedPattern& binned);
double deviance(const IntensitySurface& surface, const PointPattern& pattern,
                const Grid& grid);

/// log likelihood: sum_i log lambda(s_i) - integral of lambda.
double log_likelihood(const IntensitySurface& surface, const BinnedPattern& binned);

/// 2 * (average deviance over retained draws) - deviance at the draw
/// `point_estimate_index` (normally the Dahl selection).
double dic(const Chain& chain, const BinnedPattern& binned,
           std::size_t point_estimate_index);

/// sum_i log lambda~(s_i) - sum_boxes lambda_bar_b * area_b, where lambda~
/// is the per-box harmonic mean over draws and lambda_bar the arithmetic mean.
double lpml(const Chain& chain, const BinnedPattern& binned);

/// -2 log L + K_hat * log N at the given draw. Requires at least one point.
double bic(const ChainSample& point_estimate, const BinnedPattern& binned);

/// Summary of one fitted chain.
struct FitReport {
  Model model = Model::mrf_dpm;
  double eta = 0.0;
  Grid grid;
  std::size_t representative_index = 0;  // into the retained draws
  long representative_iteration = 0;     // sweep number of that draw
  int k_hat = 0;
  std::vector<int> z_hat;                   // per box
  std::vector<double> lambda_hat;           // per cluster, length k_hat
  std::vector<double> posterior_mean_lambda;  // per box, mean over draws
  double dic = 0.0;
  double lpml = 0.0;
  double bic = 0.0;
  std::vector<double> ri_trace;
  std::vector<int> k_trace;

  explicit FitReport(const Grid& g) : grid(g) {}
};

/// Dahl point estimate plus the three criteria for one chain.
FitReport summarize_chain(const Chain& chain, const BinnedPattern& binned,
                          Model model, double eta);

/// The eta whose report optimizes the criterion (min for DIC/BIC, max for
/// LPML); ties go to the smaller eta.
double select_eta(std::span<const FitReport> fits, Criterion criterion);
const FitReport& select_fit(std::span<const FitReport> fits, Criterion criterion);

}  // namespace nhppclust
