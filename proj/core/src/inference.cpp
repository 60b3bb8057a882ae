#include "nhppclust/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace nhppclust {

const char* model_name(Model model) {
  switch (model) {
    case Model::mrf_dpm: return "mrf_dpm";
    case Model::mfm: return "mfm";
  }
  throw std::invalid_argument("unknown model");
}

const char* criterion_name(Criterion criterion) {
  switch (criterion) {
    case Criterion::dic: return "dic";
    case Criterion::lpml: return "lpml";
    case Criterion::bic: return "bic";
  }
  throw std::invalid_argument("unknown criterion");
}

namespace {

// Dense relabeling 0..K-1. Nonnegative labels below the cap map through a
// table (the common case: sampler labels are already compact); anything else
// goes through a hash map.
std::vector<int> dense_labels(std::span<const int> z, int& k_out) {
  constexpr int kTableCap = 1 << 16;
  int max_label = -1;
  bool small = true;
  for (int label : z) {
    if (label < 0 || label >= kTableCap) {
      small = false;
      break;
    }
    max_label = std::max(max_label, label);
  }
  std::vector<int> dense(z.size());
  int next = 0;
  if (small) {
    std::vector<int> table(static_cast<std::size_t>(max_label) + 1, -1);
    for (std::size_t i = 0; i < z.size(); ++i) {
      int& slot = table[static_cast<std::size_t>(z[i])];
      if (slot < 0) slot = next++;
      dense[i] = slot;
    }
  } else {
    std::unordered_map<int, int> table;
    table.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      auto [it, inserted] = table.try_emplace(z[i], next);
      if (inserted) ++next;
      dense[i] = it->second;
    }
  }
  k_out = next;
  return dense;
}

long long pairs(long long count) { return count * (count - 1) / 2; }

}  // namespace

double rand_index(std::span<const int> z1, std::span<const int> z2) {
  if (z1.size() != z2.size()) {
    throw std::invalid_argument("clusterings must have equal length");
  }
  const long long n = static_cast<long long>(z1.size());
  if (n < 2) return 1.0;
  int k1 = 0;
  int k2 = 0;
  const std::vector<int> d1 = dense_labels(z1, k1);
  const std::vector<int> d2 = dense_labels(z2, k2);
  std::vector<long long> table(static_cast<std::size_t>(k1) *
                                   static_cast<std::size_t>(k2),
                               0);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    table[static_cast<std::size_t>(d1[i]) * static_cast<std::size_t>(k2) +
          static_cast<std::size_t>(d2[i])] += 1;
  }
  long long together_both = 0;
  for (long long cell : table) together_both += pairs(cell);
  long long together_1 = 0;
  for (int r = 0; r < k1; ++r) {
    long long row = 0;
    for (int c = 0; c < k2; ++c) {
      row += table[static_cast<std::size_t>(r) * static_cast<std::size_t>(k2) +
                   static_cast<std::size_t>(c)];
    }
    together_1 += pairs(row);
  }
  long long together_2 = 0;
  for (int c = 0; c < k2; ++c) {
    long long col = 0;
    for (int r = 0; r < k1; ++r) {
      col += table[static_cast<std::size_t>(r) * static_cast<std::size_t>(k2) +
                   static_cast<std::size_t>(c)];
    }
    together_2 += pairs(col);
  }
  const long long total = pairs(n);
  // Concordant pairs: apart in both = total - t1 - t2 + together_both.
  const long long agreements = total - together_1 - together_2 + 2 * together_both;
  return static_cast<double>(agreements) / static_cast<double>(total);
}

namespace {

std::vector<std::vector<int>> cluster_members(const std::vector<int>& z) {
  int k = 0;
  for (int label : z) k = std::max(k, label + 1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < z.size(); ++i) {
    members[static_cast<std::size_t>(z[i])].push_back(static_cast<int>(i));
  }
  return members;
}

}  // namespace

std::size_t dahl_select(const Chain& chain) {
  const std::size_t m = chain.samples.size();
  if (m == 0) {
    throw std::invalid_argument("cannot select a draw from an empty chain");
  }
  const std::size_t n = chain.samples.front().z.size();
  // Posterior mean co-clustering matrix, accumulated in place.
  std::vector<double> mean(n * n, 0.0);
  for (const ChainSample& sample : chain.samples) {
    for (const auto& cluster : cluster_members(sample.z)) {
      for (int i : cluster) {
        double* row = mean.data() + static_cast<std::size_t>(i) * n;
        for (int j : cluster) row[static_cast<std::size_t>(j)] += 1.0;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(m);
  for (double& value : mean) value *= scale;

  // ||delta_l - mean||^2 = S_l - 2 T_l + const, with S_l the number of
  // co-clustered (i, j) in draw l and T_l the mean-matrix mass on them.
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < m; ++l) {
    double s = 0.0;
    double t = 0.0;
    for (const auto& cluster : cluster_members(chain.samples[l].z)) {
      const double size = static_cast<double>(cluster.size());
      s += size * size;
      for (int i : cluster) {
        const double* row = mean.data() + static_cast<std::size_t>(i) * n;
        for (int j : cluster) t += row[static_cast<std::size_t>(j)];
      }
    }
    const double distance = s - 2.0 * t;
    if (distance < best_distance) {
      best_distance = distance;
      best = l;
    }
  }
  return best;
}

std::vector<double> sample_box_lambda(const ChainSample& sample) {
  std::vector<double> out(sample.z.size());
  for (std::size_t i = 0; i < sample.z.size(); ++i) {
    out[i] = sample.lambda[static_cast<std::size_t>(sample.z[i])];
  }
  return out;
}

double log_likelihood(const IntensitySurface& surface,
                      const BinnedPattern& binned) {
  if (surface.lambda.size() != binned.counts.size()) {
    throw std::invalid_argument("surface does not match binned pattern");
  }
  const double mu = binned.grid.box_area();
  double point_term = 0.0;
  double integral = 0.0;
  for (std::size_t b = 0; b < binned.counts.size(); ++b) {
    integral += surface.lambda[b] * mu;
    if (binned.counts[b] > 0) {
      point_term +=
          static_cast<double>(binned.counts[b]) * std::log(surface.lambda[b]);
    }
  }
  return point_term - integral;
}

double deviance(const IntensitySurface& surface, const BinnedPattern& binned) {
  return -2.0 * log_likelihood(surface, binned);
}

double deviance(const IntensitySurface& surface, const PointPattern& pattern,
                const Grid& grid) {
  return deviance(surface, bin_points(pattern, grid));
}

double dic(const Chain& chain, const BinnedPattern& binned,
           std::size_t point_estimate_index) {
  if (point_estimate_index >= chain.samples.size()) {
    throw std::out_of_range("point estimate index outside retained draws");
  }
  double mean_deviance = 0.0;
  for (const ChainSample& sample : chain.samples) {
    const IntensitySurface surface(binned.grid, sample_box_lambda(sample));
    mean_deviance += deviance(surface, binned);
  }
  mean_deviance /= static_cast<double>(chain.samples.size());
  const IntensitySurface at_estimate(
      binned.grid, sample_box_lambda(chain.samples[point_estimate_index]));
  return 2.0 * mean_deviance - deviance(at_estimate, binned);
}

double lpml(const Chain& chain, const BinnedPattern& binned) {
  const std::size_t m = chain.samples.size();
  if (m == 0) {
    throw std::invalid_argument("cannot compute lpml from an empty chain");
  }
  const std::size_t n = binned.counts.size();
  std::vector<double> inv_sum(n, 0.0);
  std::vector<double> mean(n, 0.0);
  for (const ChainSample& sample : chain.samples) {
    for (std::size_t b = 0; b < n; ++b) {
      const double lambda = sample.lambda[static_cast<std::size_t>(sample.z[b])];
      inv_sum[b] += 1.0 / lambda;
      mean[b] += lambda;
    }
  }
  // Accumulated the same way as log_likelihood (point term and integral
  // separately) so the one-draw case reduces to it without extra rounding.
  const double mu = binned.grid.box_area();
  const double draws = static_cast<double>(m);
  double point_term = 0.0;
  double integral = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    integral += (mean[b] / draws) * mu;
    if (binned.counts[b] > 0) {
      // Harmonic mean of the draws for the boxes that hold points.
      point_term +=
          static_cast<double>(binned.counts[b]) * std::log(draws / inv_sum[b]);
    }
  }
  return point_term - integral;
}

double bic(const ChainSample& point_estimate, const BinnedPattern& binned) {
  if (binned.total <= 0) {
    throw std::invalid_argument("bic requires at least one observed point");
  }
  const IntensitySurface surface(binned.grid, sample_box_lambda(point_estimate));
  const double k_hat = static_cast<double>(point_estimate.lambda.size());
  return -2.0 * log_likelihood(surface, binned) +
         k_hat * std::log(static_cast<double>(binned.total));
}

FitReport summarize_chain(const Chain& chain, const BinnedPattern& binned,
                          Model model, double eta) {
  FitReport report(binned.grid);
  report.model = model;
  report.eta = eta;
  const std::size_t rep = dahl_select(chain);
  report.representative_index = rep;
  report.representative_iteration = chain.samples[rep].iteration;
  report.z_hat = chain.samples[rep].z;
  report.lambda_hat = chain.samples[rep].lambda;
  report.k_hat = static_cast<int>(report.lambda_hat.size());
  const std::size_t n = binned.counts.size();
  report.posterior_mean_lambda.assign(n, 0.0);
  for (const ChainSample& sample : chain.samples) {
    for (std::size_t b = 0; b < n; ++b) {
      report.posterior_mean_lambda[b] +=
          sample.lambda[static_cast<std::size_t>(sample.z[b])];
    }
  }
  for (double& value : report.posterior_mean_lambda) {
    value /= static_cast<double>(chain.samples.size());
  }
  report.dic = dic(chain, binned, rep);
  report.lpml = lpml(chain, binned);
  report.bic = bic(chain.samples[rep], binned);
  report.ri_trace = chain.ri_trace;
  report.k_trace = chain.k_trace;
  return report;
}

namespace {

double criterion_score(const FitReport& fit, Criterion criterion) {
  switch (criterion) {
    case Criterion::dic: return fit.dic;
    case Criterion::lpml: return fit.lpml;
    case Criterion::bic: return fit.bic;
  }
  throw std::invalid_argument("unknown criterion");
}

}  // namespace

const FitReport& select_fit(std::span<const FitReport> fits,
                            Criterion criterion) {
  if (fits.empty()) {
    throw std::invalid_argument("no fits to select from");
  }
  const FitReport* best = &fits[0];
  for (const FitReport& fit : fits.subspan(1)) {
    const double score = criterion_score(fit, criterion);
    const double best_score = criterion_score(*best, criterion);
    const bool better =
        criterion == Criterion::lpml ? score > best_score : score < best_score;
    if (better || (score == best_score && fit.eta < best->eta)) {
      best = &fit;
    }
  }
  return *best;
}

double select_eta(std::span<const FitReport> fits, Criterion criterion) {
  return select_fit(fits, criterion).eta;
}

}  // namespace nhppclust
