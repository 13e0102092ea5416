#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "fiberpol/errors.hpp"
#include "fiberpol/sweep.hpp"

using namespace fiberpol;

namespace {

double u_over_j_at(double delta_p, double omega) {
  const SweepRecord r = evaluate_node(OpticalConfig::baseline(), delta_p, omega);
  REQUIRE(r.ok());
  return r.point.u_over_j;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Distance from p to a polyline, in units where one grid cell is 1 x 1.
double cell_distance(Point2 p, const Polyline& line, double cx, double cy) {
  const auto scale = [&](Point2 q) { return Point2{q.x / cx, q.y / cy}; };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.vertices.size(); ++i)
    best = std::min(best, segment_distance(scale(p), scale(line.vertices[i]), scale(line.vertices[i + 1])));
  if (line.vertices.size() == 1) best = std::hypot((p.x - line.vertices[0].x) / cx, (p.y - line.vertices[0].y) / cy);
  return best;
}

double cell_width(const AxisRange& a) { return (a.max - a.min) / (a.count - 1); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("axis values hit both ends exactly") {
  const AxisRange a{0.5, 3.0, 7};
  const auto v = a.values();
  CHECK(v.front() == 0.5);
  CHECK(v.back() == 3.0);
  CHECK(v.size() == 7);
}

TEST_CASE("sweep_grid over the default ranges reaches the quoted tuning ranges") {
  GridSpec spec;
  const auto records = sweep_grid(spec);
  REQUIRE(records.size() == 2500);
  double max_gamma = 0;
  double max_depth = 0;
  for (const auto& r : records) {
    REQUIRE(r.ok());
    max_gamma = std::max(max_gamma, r.point.gamma_abs);
    max_depth = std::max(max_depth, r.point.v1_over_er);
  }
  CHECK(max_gamma >= 5.0);
  CHECK(max_depth >= 20.0);
  // Row-major: delta_p outer, omega inner.
  CHECK(records[0].delta_p == 2.0);
  CHECK(records[1].delta_p == 2.0);
  CHECK(records[1].omega > records[0].omega);
  CHECK(records[50].delta_p > 2.0);
}

TEST_CASE("sweep_grid without modulation") {
  GridSpec spec;
  spec.delta_p = {2, 100, 2};
  spec.omega = {0.5, 3, 2};
  spec.base.n1_fraction = 0.0;
  for (const auto& r : sweep_grid(spec)) {
    CHECK(r.point.v1_over_er == 0.0);
    CHECK((r.point.phase == Phase::Superfluid || r.point.phase == Phase::Indeterminate));
  }
}

TEST_CASE("sweep_grid marks pole-adjacent nodes instead of dropping them") {
  GridSpec spec;
  const double pole = std::sqrt(0.01 * 5 / 2.0);
  spec.delta_p = {10, 20, 2};
  spec.omega = {pole, 1.0, 3};
  const auto records = sweep_grid(spec);
  REQUIRE(records.size() == 6);
  CHECK_FALSE(records[0].ok());
  CHECK(records[0].error.find("PoleError") != std::string::npos);
  CHECK(std::isnan(records[0].point.gamma_abs));
  CHECK(records[1].ok());
}

TEST_CASE("sweep_grid rejects malformed specs") {
  GridSpec spec;
  spec.omega.count = 1;
  CHECK_THROWS_AS(sweep_grid(spec), ConfigError);
  spec = GridSpec{};
  spec.base.n0 = -1;
  CHECK_THROWS_AS(sweep_grid(spec), ConfigError);
}

TEST_CASE("sweep_grid output does not depend on the thread count") {
  GridSpec spec;
  spec.delta_p = {2, 100, 23};
  spec.omega = {0.1, 3, 19};  // includes nodes near the pole
  const auto one = sweep_grid(spec, 1);
  const auto many = sweep_grid(spec, 5);
  REQUIRE(one.size() == many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(same_bits(one[i].gamma_signed, many[i].gamma_signed));
    CHECK(same_bits(one[i].point.u_over_j, many[i].point.u_over_j));
    CHECK(one[i].error == many[i].error);
  }
}

TEST_CASE("U/J decreases along the Omega row at Delta_p = 50") {
  GridSpec spec;
  spec.delta_p = {50, 60, 2};
  spec.omega = {0.9, 1.2, 16};
  const auto records = sweep_grid(spec);
  for (int i = 0; i + 1 < 16; ++i) CHECK(records[i + 1].point.u_over_j < records[i].point.u_over_j);
  // Dense re-evaluation at 10x resolution.
  double previous = u_over_j_at(50, 0.9);
  for (int i = 1; i <= 160; ++i) {
    const double u = u_over_j_at(50, 0.9 + 0.3 * i / 160.0);
    REQUIRE(u < previous);
    previous = u;
  }
}

TEST_CASE("find_mott_crossing") {
  const OpticalConfig base = OpticalConfig::baseline();
  const double root = find_mott_crossing(base, 50, {0.9, 1.2});
  // mpmath root of U/J = 3.85: 1.0338754749986951
  CHECK(std::abs(root - 1.0338754749986951) <= 1e-6);
  CHECK(std::abs(root - 1.03388) <= 5e-4);
  CHECK(std::abs(u_over_j_at(50, root) - kCriticalUOverJ) <= 1e-4);

  CHECK_THROWS_AS(find_mott_crossing(base, 50, {2, 3}), NoBracket);
  CHECK_THROWS_AS(find_mott_crossing(base, 50, {1.0, 1.0}), NoBracket);
  CHECK_THROWS_AS(find_mott_crossing(base, 50, {0.1, 1.2}), PoleError);
}

TEST_CASE("U/J stays below (U/J)_c over Omega in [2, 3]") {
  for (int i = 0; i <= 200; ++i) CHECK(u_over_j_at(50, 2.0 + i / 200.0) < kCriticalUOverJ);
}

TEST_CASE("find_pinning_crossing") {
  const OpticalConfig base = OpticalConfig::baseline();
  SUBCASE("crossing exists in the strong-interaction window") {
    const PinningCrossing c = find_pinning_crossing(base, 10, {1, 3});
    // mpmath: Omega* = 1.9061728676724702, |gamma| = 1.0144, V1/E_R = 2.8079
    CHECK(std::abs(c.omega - 1.9061728676724702) <= 1e-6);
    CHECK(c.omega > 1.0);
    CHECK(c.gamma_abs >= 1.0);
    CHECK(c.gamma_abs <= 5.0);
    const double residual = c.v1_over_er - sg_critical_depth(c.gamma_abs);
    CHECK(std::abs(residual) <= 1e-4 * c.v1_over_er);
  }
  SUBCASE("weak interactions lie outside the sine-Gordon window") {
    CHECK_THROWS_AS(find_pinning_crossing(base, 100, {1, 3}), RegimeError);
  }
  SUBCASE("bracket entirely on the pinned side") {
    CHECK_THROWS_AS(find_pinning_crossing(base, 4, {2.0, 2.5}), NoBracket);
  }
}

TEST_CASE("phase_boundaries") {
  GridSpec spec;
  spec.delta_p = {20, 100, 41};
  spec.omega = {0.8, 1.5, 36};

  SUBCASE("BH line passes the Delta_p = 50 Mott crossing") {
    const auto lines = phase_boundaries(spec);
    REQUIRE_FALSE(lines.empty());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : lines)
      if (l.model == BoundaryModel::BoseHubbard)
        best = std::min(best, cell_distance({50.0, 1.034}, l, cell_width(spec.delta_p), cell_width(spec.omega)));
    CHECK(best <= 1.0);
  }

  SUBCASE("no modulation means no boundary") {
    spec.base.n1_fraction = 0.0;
    CHECK_THROWS_AS(phase_boundaries(spec), EmptyBoundary);
  }

  SUBCASE("2x refinement moves every vertex by less than a coarse cell") {
    for (const GridSpec& coarse : {spec, GridSpec{{2, 40, 39}, {0.5, 3, 26}, OpticalConfig::baseline()}}) {
      GridSpec fine = coarse;
      fine.delta_p.count = 2 * coarse.delta_p.count - 1;
      fine.omega.count = 2 * coarse.omega.count - 1;
      const auto a = phase_boundaries(coarse);
      const auto b = phase_boundaries(fine);
      const double cx = cell_width(coarse.delta_p);
      const double cy = cell_width(coarse.omega);
      auto directed = [&](const std::vector<Polyline>& from, const std::vector<Polyline>& to) {
        double worst = 0;
        for (const auto& l : from)
          for (const auto& v : l.vertices) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : to)
              if (m.model == l.model) best = std::min(best, cell_distance(v, m, cx, cy));
            worst = std::max(worst, best);
          }
        return worst;
      };
      CHECK(directed(a, b) <= 1.0);
      CHECK(directed(b, a) <= 1.0);
    }
  }
}

TEST_CASE("marching squares on a circle") {
  ScalarGrid g;
  for (int i = 0; i <= 20; ++i) {
    g.xs.push_back(-1.0 + 0.1 * i);
    g.ys.push_back(-1.0 + 0.1 * i);
  }
  for (double x : g.xs)
    for (double y : g.ys) {
      const double v = 0.5 * 0.5 - (x * x + y * y);
      g.values.push_back(v);
      g.inside.push_back(v >= 0 ? 1 : 0);
    }
  const auto lines = marching_squares(g);
  REQUIRE(lines.size() == 1);
  const auto& ring = lines[0];
  CHECK(ring.front().x == doctest::Approx(ring.back().x));
  CHECK(ring.front().y == doctest::Approx(ring.back().y));
  for (const auto& p : ring) CHECK(std::hypot(p.x, p.y) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("marching squares skips masked cells") {
  ScalarGrid g;
  g.xs = {0, 1, 2};
  g.ys = {0, 1};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  g.values = {-1, -1, 1, 1, nan, nan};
  g.inside = {0, 0, 1, 1, 0, 0};
  const auto lines = marching_squares(g);
  REQUIRE(lines.size() == 1);
  REQUIRE(lines[0].size() == 2);
  CHECK(lines[0][0].x == doctest::Approx(0.5));
  CHECK(lines[0][1].x == doctest::Approx(0.5));
}
