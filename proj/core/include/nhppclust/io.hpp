#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nhppclust/grid.hpp"
#include "nhppclust/inference.hpp"
#include "nhppclust/sampler.hpp"
#include "nhppclust/simulate.hpp"
#include "nhppclust/study.hpp"

namespace nhppclust {

// All emitters are byte-stable for fixed inputs: fixed number formatting and
// no timestamps.

std::string grid_to_json(const Grid& grid);
Grid grid_from_json(const std::string& text);

void write_pattern_json(const std::string& path, const PointPattern& pattern,
                        std::size_t dropped = 0);
PointPattern read_pattern_json(const std::string& path,
                               std::size_t* dropped = nullptr);

/// Ground truth of a simulation setting: grid, per-box labels, and
/// component values.
void write_truth_json(const std::string& path, const SimulationSetting& setting);

struct TruthData {
  Grid grid;
  std::vector<int> z_true;
  std::vector<double> lambda_true;  // per component
};
TruthData read_truth_json(const std::string& path);

/// One retained draw per line: {"iteration", "k", "z", "lambda", "ri_prev"}.
void write_chain_jsonl(const std::string& path, const Chain& chain);

void write_fit_report_json(const std::string& path, const FitReport& report);
FitReport read_fit_report_json(const std::string& path);

/// Columns: eta, dic, lpml, bic, k_hat. One row per fit.
void write_criteria_csv(const std::string& path, std::span<const FitReport> fits);

void write_study_report_json(const std::string& path, const StudyReport& report);
/// Columns: replicate, criterion, eta, k_hat, ri_mean, ri_dahl, runtime_sec.
void write_study_replicates_csv(const std::string& path, const StudyReport& report);

/// Per-box values as a CSV matrix, n_y rows by n_x columns. Rows are written
/// top-down (first row is the highest-y band) so the file reads like a map.
void write_matrix_csv(const std::string& path, const Grid& grid,
                      std::span<const double> values);

struct MatrixData {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> values;  // grid order (row-major from min corner)
};
MatrixData read_matrix_csv(const std::string& path);

/// SVG heatmap of per-box values: one rect per box, filled with a monotone
/// viridis-style color ramp from the minimum to the maximum value.
std::string render_heatmap_svg(const Grid& grid, std::span<const double> values);
void write_heatmap_svg(const std::string& path, const Grid& grid,
                       std::span<const double> values);

}  // namespace nhppclust
