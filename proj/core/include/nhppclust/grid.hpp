#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhppclust {

/// Axis-aligned rectangular study region, coordinates in application units.
struct StudyRegion {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  // Closed rectangle: boundary points count as inside.
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

void validate_region(const StudyRegion& region);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Observed locations inside a study region.
struct PointPattern {
  StudyRegion region;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
};

/// Uniform partition of a study region into n_x * n_y rectangular boxes.
///
/// Box indices are row-major from the (x_min, y_min) corner: box index
/// i = row * n_x + col, where col counts boxes along x and row along y.
/// Boxes are half-open ([x0, x1) x [y0, y1)); points landing exactly on a
/// shared edge belong to the box with the larger index, and the maximum
/// region boundary is closed so every point of the closed region maps to
/// exactly one box.
class Grid {
 public:
  Grid(const StudyRegion& region, int n_x, int n_y);

  const StudyRegion& region() const { return region_; }
  int nx() const { return n_x_; }
  int ny() const { return n_y_; }
  int size() const { return n_x_ * n_y_; }

  double box_width() const { return box_width_; }
  double box_height() const { return box_height_; }
  double box_area() const { return box_area_; }

  int index_of(int row, int col) const { return row * n_x_ + col; }
  int row_of(int index) const { return index / n_x_; }
  int col_of(int index) const { return index % n_x_; }

  /// Box containing (x, y); throws std::out_of_range for points outside
  /// the closed region.
  int locate(double x, double y) const;

  // Geometry of one box.
  double box_x_min(int index) const {
    return region_.x_min + col_of(index) * box_width_;
  }
  double box_y_min(int index) const {
    return region_.y_min + row_of(index) * box_height_;
  }

 private:
  StudyRegion region_;
  int n_x_ = 0;
  int n_y_ = 0;
  double box_width_ = 0.0;
  double box_height_ = 0.0;
  double box_area_ = 0.0;
};

Grid build_grid(const StudyRegion& region, int n_x, int n_y);

/// Symmetric weighted neighbor lists; no self-loops.
struct NeighborGraph {
  struct Neighbor {
    int index = 0;
    double weight = 1.0;
  };

  std::vector<std::vector<Neighbor>> adjacency;

  std::size_t size() const { return adjacency.size(); }
  const std::vector<Neighbor>& neighbors(int box) const {
    return adjacency[static_cast<std::size_t>(box)];
  }
};

/// Rook contiguity (shared edges) with unit weights.
NeighborGraph rook_neighbors(const Grid& grid);

/// Per-box counts of a point pattern.
struct BinnedPattern {
  Grid grid;
  std::vector<long> counts;
  long total = 0;

  BinnedPattern(const Grid& g, std::vector<long> c, long t)
      : grid(g), counts(std::move(c)), total(t) {}
};

class PointOutsideRegionError : public std::runtime_error {
 public:
  PointOutsideRegionError(std::size_t point_index, Point point);

  std::size_t point_index() const { return point_index_; }
  Point point() const { return point_; }

 private:
  std::size_t point_index_;
  Point point_;
};

/// Bins every point into its box. Throws PointOutsideRegionError (carrying
/// the offending index) if a point falls outside the closed region.
BinnedPattern bin_points(const PointPattern& pattern, const Grid& grid);

}  // namespace nhppclust
