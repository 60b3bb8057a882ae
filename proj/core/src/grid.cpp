#include "nhppclust/grid.hpp"

#include <cmath>
#include <sstream>

namespace nhppclust {

void validate_region(const StudyRegion& region) {
  if (!(region.x_min < region.x_max) || !(region.y_min < region.y_max)) {
    std::ostringstream msg;
    msg << "degenerate study region [" << region.x_min << "," << region.x_max
        << "]x[" << region.y_min << "," << region.y_max << "]";
    throw std::invalid_argument(msg.str());
  }
  if (!std::isfinite(region.x_min) || !std::isfinite(region.x_max) ||
      !std::isfinite(region.y_min) || !std::isfinite(region.y_max)) {
    throw std::invalid_argument("study region bounds must be finite");
  }
}

Grid::Grid(const StudyRegion& region, int n_x, int n_y)
    : region_(region), n_x_(n_x), n_y_(n_y) {
  validate_region(region);
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  box_width_ = region.width() / n_x;
  box_height_ = region.height() / n_y;
  box_area_ = box_width_ * box_height_;
}

int Grid::locate(double x, double y) const {
  if (!region_.contains(x, y)) {
    std::ostringstream msg;
    msg << "point (" << x << "," << y << ") outside study region";
    throw std::out_of_range(msg.str());
  }
  // Half-open boxes; the max boundary of the region folds into the last
  // box. The clamp also absorbs roundoff in the division.
  int col = static_cast<int>(std::floor((x - region_.x_min) / box_width_));
  int row = static_cast<int>(std::floor((y - region_.y_min) / box_height_));
  col = std::min(std::max(col, 0), n_x_ - 1);
  row = std::min(std::max(row, 0), n_y_ - 1);
  return index_of(row, col);
}

Grid build_grid(const StudyRegion& region, int n_x, int n_y) {
  return Grid(region, n_x, n_y);
}

NeighborGraph rook_neighbors(const Grid& grid) {
  NeighborGraph graph;
  graph.adjacency.resize(static_cast<std::size_t>(grid.size()));
  const int n_x = grid.nx();
  const int n_y = grid.ny();
  for (int row = 0; row < n_y; ++row) {
    for (int col = 0; col < n_x; ++col) {
      auto& list = graph.adjacency[static_cast<std::size_t>(grid.index_of(row, col))];
      if (col > 0) list.push_back({grid.index_of(row, col - 1), 1.0});
      if (col + 1 < n_x) list.push_back({grid.index_of(row, col + 1), 1.0});
      if (row > 0) list.push_back({grid.index_of(row - 1, col), 1.0});
      if (row + 1 < n_y) list.push_back({grid.index_of(row + 1, col), 1.0});
    }
  }
  return graph;
}

PointOutsideRegionError::PointOutsideRegionError(std::size_t point_index, Point point)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "point " << point_index << " at (" << point.x << "," << point.y
            << ") lies outside the study region";
        return msg.str();
      }()),
      point_index_(point_index),
      point_(point) {}

BinnedPattern bin_points(const PointPattern& pattern, const Grid& grid) {
  std::vector<long> counts(static_cast<std::size_t>(grid.size()), 0);
  for (std::size_t i = 0; i < pattern.points.size(); ++i) {
    const Point& p = pattern.points[i];
    if (!grid.region().contains(p.x, p.y)) {
      throw PointOutsideRegionError(i, p);
    }
    ++counts[static_cast<std::size_t>(grid.locate(p.x, p.y))];
  }
  return BinnedPattern(grid, std::move(counts),
                       static_cast<long>(pattern.points.size()));
}

}  // namespace nhppclust
