#include "nhppclust/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nhppclust/rng.hpp"

namespace nhppclust {

double IntensitySurface::expected_points() const {
  double total = 0.0;
  for (double value : lambda) total += value;
  return total * grid.box_area();
}

void validate_surface(const IntensitySurface& surface) {
  if (surface.lambda.size() != static_cast<std::size_t>(surface.grid.size())) {
    throw std::invalid_argument("intensity surface size does not match grid");
  }
  for (double value : surface.lambda) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("intensity values must be positive and finite");
    }
  }
}

SimulationSetting::SimulationSetting(std::string n, const Grid& g,
                                     std::vector<double> values,
                                     std::vector<int> assign)
    : name(std::move(n)),
      grid(g),
      component_values(std::move(values)),
      assignment(std::move(assign)) {
  if (assignment.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("assignment size does not match grid");
  }
  std::set<double> distinct(component_values.begin(), component_values.end());
  if (distinct.size() != component_values.size()) {
    throw std::invalid_argument("component values must be distinct");
  }
  component_box_counts.assign(component_values.size(), 0);
  for (int label : assignment) {
    if (label < 0 || label >= component_count()) {
      throw std::invalid_argument("assignment label out of range");
    }
    ++component_box_counts[static_cast<std::size_t>(label)];
  }
}

IntensitySurface SimulationSetting::surface() const {
  std::vector<double> lambda(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    lambda[i] = component_values[static_cast<std::size_t>(assignment[i])];
  }
  return IntensitySurface(grid, std::move(lambda));
}

namespace {

// Assigns `label` to the rectangle rows [r0, r1] x cols [c0, c1], inclusive.
void paint(std::vector<int>& assign, const Grid& grid, int r0, int r1, int c0,
           int c1, int label) {
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      assign[static_cast<std::size_t>(grid.index_of(row, col))] = label;
    }
  }
}

}  // namespace

SimulationSetting make_setting(int id, const Grid& grid) {
  if (grid.nx() != 20 || grid.ny() != 20) {
    throw std::invalid_argument("benchmark settings require a 20x20 grid");
  }
  const std::size_t n = static_cast<std::size_t>(grid.size());
  std::vector<int> assign(n, -1);
  switch (id) {
    case 1: {
      // Low band along the bottom (90), a high interior block (99), the
      // ambient level elsewhere (211).
      paint(assign, grid, 0, 19, 0, 19, 1);    // lambda = 4
      paint(assign, grid, 0, 5, 0, 14, 0);     // lambda = 0.2, 6x15 = 90
      paint(assign, grid, 8, 16, 6, 16, 2);    // lambda = 12, 9x11 = 99
      return SimulationSetting("setting1", grid, {0.2, 4.0, 12.0},
                               std::move(assign));
    }
    case 2: {
      // Five vertical bands of four columns each, intensity rising left to
      // right.
      for (int band = 0; band < 5; ++band) {
        paint(assign, grid, 0, 19, 4 * band, 4 * band + 3, band);
      }
      return SimulationSetting("setting2", grid, {0.2, 1.0, 4.0, 8.0, 16.0},
                               std::move(assign));
    }
    case 3: {
      // One component split into two non-touching blocks (81 + 64 boxes) to
      // exercise recovery of spatially disconnected clusters.
      paint(assign, grid, 0, 19, 0, 19, 0);    // lambda = 0.2 fills the gaps (90)
      paint(assign, grid, 0, 8, 0, 8, 1);      // lambda = 4, 9x9 = 81
      paint(assign, grid, 12, 19, 12, 19, 1);  // lambda = 4, 8x8 = 64
      paint(assign, grid, 14, 19, 0, 10, 2);   // lambda = 10, 6x11 = 66
      paint(assign, grid, 0, 8, 9, 19, 3);     // lambda = 20, 9x11 = 99
      return SimulationSetting("setting3", grid, {0.2, 4.0, 10.0, 20.0},
                               std::move(assign));
    }
    default: {
      std::ostringstream msg;
      msg << "unknown simulation setting " << id << " (expected 1, 2, or 3)";
      throw std::invalid_argument(msg.str());
    }
  }
}

PointPattern simulate_nhpp(const IntensitySurface& surface, std::uint64_t seed) {
  std::mt19937_64 rng = make_rng(seed);
  return simulate_nhpp(surface, rng);
}

PointPattern simulate_nhpp(const IntensitySurface& surface,
                           std::mt19937_64& rng) {
  validate_surface(surface);
  const Grid& grid = surface.grid;
  PointPattern pattern;
  pattern.region = grid.region();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int box = 0; box < grid.size(); ++box) {
    const double mean = surface.lambda[static_cast<std::size_t>(box)] * grid.box_area();
    std::poisson_distribution<long> count_dist(mean);
    const long count = count_dist(rng);
    const double x0 = grid.box_x_min(box);
    const double y0 = grid.box_y_min(box);
    for (long j = 0; j < count; ++j) {
      pattern.points.push_back(
          {x0 + unit(rng) * grid.box_width(), y0 + unit(rng) * grid.box_height()});
    }
  }
  return pattern;
}

}  // namespace nhppclust
