#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nhppclust/grid.hpp"

namespace nhppclust {

/// Piecewise-constant intensity: one positive value per grid box,
/// expected points per unit area.
struct IntensitySurface {
  Grid grid;
  std::vector<double> lambda;

  IntensitySurface(const Grid& g, std::vector<double> values)
      : grid(g), lambda(std::move(values)) {}

  /// Sum of lambda_i * area_i over all boxes (expected total point count).
  double expected_points() const;
};

void validate_surface(const IntensitySurface& surface);

/// A named ground-truth configuration: component intensity values plus a
/// per-box component assignment.
struct SimulationSetting {
  std::string name;
  Grid grid;
  std::vector<double> component_values;   // distinct, positive
  std::vector<int> assignment;            // per box, 0-based component index
  std::vector<int> component_box_counts;  // boxes per component

  SimulationSetting(std::string n, const Grid& g, std::vector<double> values,
                    std::vector<int> assign);

  int component_count() const { return static_cast<int>(component_values.size()); }
  IntensitySurface surface() const;
};

/// The three benchmark settings on a 20x20 unit grid over [0,20]^2:
///   1: values (0.2, 4, 12),        box counts (90, 211, 99)
///   2: values (0.2, 1, 4, 8, 16),  box counts (80, 80, 80, 80, 80)
///   3: values (0.2, 4, 10, 20),    box counts (90, 145, 66, 99); the
///      value-4 component occupies two non-adjacent blocks.
/// Layouts are fixed rectangles, documented in simulate.cpp.
SimulationSetting make_setting(int id, const Grid& grid20x20);

/// Exact sampling from the piecewise-constant NHPP: per box a
/// Poisson(lambda_i * area_i) count, then that many uniform locations
/// inside the box. Reproducible for a fixed seed.
PointPattern simulate_nhpp(const IntensitySurface& surface, std::uint64_t seed);
PointPattern simulate_nhpp(const IntensitySurface& surface, std::mt19937_64& rng);

}  // namespace nhppclust
