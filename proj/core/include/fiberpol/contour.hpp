#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fiberpol {

struct Point2 {
  double x = 0;
  double y = 0;
};

/// Scalar field sampled on a rectilinear grid, row-major in x then y:
/// value(ix, iy) = values[ix * ys.size() + iy]. A node is "inside" when its
/// flag is set; NaN values mask the node and every cell touching it.
struct ScalarGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;
  std::vector<char> inside;

  double value(std::size_t ix, std::size_t iy) const { return values[ix * ys.size() + iy]; }
  bool is_inside(std::size_t ix, std::size_t iy) const { return inside[ix * ys.size() + iy] != 0; }
};

/// Marching squares. Edge crossings are placed by linear interpolation of
/// the field; saddle cells are resolved with the cell-centre average.
/// Segments are stitched into polylines whose vertex order follows the
/// traversal. Output order depends only on the grid, never on timing.
std::vector<std::vector<Point2>> marching_squares(const ScalarGrid& grid);

}  // namespace fiberpol
