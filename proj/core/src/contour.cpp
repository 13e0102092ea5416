#include "fiberpol/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace fiberpol {

namespace {

struct Segment {
  std::int64_t a;
  std::int64_t b;
};

class EdgeIndex {
 public:
  EdgeIndex(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {}

  // Edge from (ix, iy) to (ix + 1, iy).
  std::int64_t along_x(std::size_t ix, std::size_t iy) const { return static_cast<std::int64_t>(ix * ny_ + iy); }
  // Edge from (ix, iy) to (ix, iy + 1).
  std::int64_t along_y(std::size_t ix, std::size_t iy) const {
    return static_cast<std::int64_t>(nx_ * ny_ + ix * ny_ + iy);
  }

  Point2 crossing(const ScalarGrid& g, std::int64_t id) const {
    const auto raw = static_cast<std::size_t>(id);
    const bool x_edge = raw < nx_ * ny_;
    const std::size_t local = x_edge ? raw : raw - nx_ * ny_;
    const std::size_t ix = local / ny_;
    const std::size_t iy = local % ny_;
    const std::size_t jx = x_edge ? ix + 1 : ix;
    const std::size_t jy = x_edge ? iy : iy + 1;
    const double fa = g.value(ix, iy);
    const double fb = g.value(jx, jy);
    double t = 0.5;
    if (fa != fb) t = std::clamp(fa / (fa - fb), 0.0, 1.0);
    return {g.xs[ix] + t * (g.xs[jx] - g.xs[ix]), g.ys[iy] + t * (g.ys[jy] - g.ys[iy])};
  }

 private:
  std::size_t nx_;
  std::size_t ny_;
};

}  // namespace

std::vector<std::vector<Point2>> marching_squares(const ScalarGrid& grid) {
  const std::size_t nx = grid.xs.size();
  const std::size_t ny = grid.ys.size();
  if (grid.values.size() != nx * ny || grid.inside.size() != nx * ny)
    throw std::invalid_argument("marching_squares: field size does not match the axes");
  if (nx < 2 || ny < 2) return {};

  const EdgeIndex edges(nx, ny);
  std::vector<Segment> segments;

  for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
      // Corners counter-clockwise from bottom-left; edge k joins corner k and k+1.
      const std::array<std::pair<std::size_t, std::size_t>, 4> corner{
          {{ix, iy}, {ix + 1, iy}, {ix + 1, iy + 1}, {ix, iy + 1}}};
      const std::array<std::int64_t, 4> edge{edges.along_x(ix, iy), edges.along_y(ix + 1, iy),
                                             edges.along_x(ix, iy + 1), edges.along_y(ix, iy)};
      std::array<bool, 4> in{};
      double centre = 0;
      bool masked = false;
      for (int k = 0; k < 4; ++k) {
        const double v = grid.value(corner[k].first, corner[k].second);
        if (std::isnan(v)) masked = true;
        centre += v / 4.0;
        in[k] = grid.is_inside(corner[k].first, corner[k].second);
      }
      if (masked) continue;

      std::array<std::int64_t, 4> cut{};
      int n_cut = 0;
      for (int k = 0; k < 4; ++k)
        if (in[k] != in[(k + 1) % 4]) cut[n_cut++] = k;
      if (n_cut == 2) {
        segments.push_back({edge[cut[0]], edge[cut[1]]});
      } else if (n_cut == 4) {
        // Saddle: isolate the two corners whose side differs from the centre.
        const bool centre_in = centre >= 0.0;
        for (int k = 0; k < 4; ++k) {
          if (in[k] == centre_in) continue;
          segments.push_back({edge[(k + 3) % 4], edge[k]});
        }
      }
    }
  }

  std::map<std::int64_t, std::vector<std::size_t>> touching;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    touching[segments[s].a].push_back(s);
    touching[segments[s].b].push_back(s);
  }

  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<Point2>> polylines;

  auto trace = [&](std::int64_t start) {
    std::vector<Point2> line{edges.crossing(grid, start)};
    std::int64_t at = start;
    for (;;) {
      std::size_t next = segments.size();
      for (std::size_t s : touching[at])
        if (!used[s]) {
          next = s;
          break;
        }
      if (next == segments.size()) break;
      used[next] = 1;
      at = segments[next].a == at ? segments[next].b : segments[next].a;
      line.push_back(edges.crossing(grid, at));
    }
    polylines.push_back(std::move(line));
  };

  // Open chains first (ends touch a single segment), then closed loops.
  for (const auto& [id, segs] : touching)
    if (segs.size() == 1 && !used[segs.front()]) trace(id);
  for (const auto& [id, segs] : touching)
    for (std::size_t s : segs)
      if (!used[s]) trace(id);

  return polylines;
}

}  // namespace fiberpol
