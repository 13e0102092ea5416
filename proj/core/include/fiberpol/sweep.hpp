#pragma once

// Parameter scans over (Delta_p/Gamma, Omega/Gamma), root finding for the
// two transition lines and contour extraction of the phase boundaries.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fiberpol/contour.hpp"
#include "fiberpol/many_body.hpp"
#include "fiberpol/optics_map.hpp"

namespace fiberpol {

struct AxisRange {
  double min = 0;
  double max = 0;
  int count = 2;

  double at(int i) const;
  std::vector<double> values() const;
};

struct GridSpec {
  AxisRange delta_p{2.0, 100.0, 50};
  AxisRange omega{0.5, 3.0, 50};
  OpticalConfig base = OpticalConfig::baseline();

  /// Throws ConfigError on a malformed axis or an invalid base config.
  void validate() const;
};

struct SweepRecord {
  double delta_p = 0;
  double omega = 0;
  double gamma_signed = 0;
  ManyBodyPoint point;
  double v_g = 0;
  double kappa = 0;
  std::string error;  // non-empty for gap records (e.g. next to the Lambda pole)

  bool ok() const noexcept { return error.empty(); }
};

/// Evaluates one grid node; failures become a gap record, never an exception.
SweepRecord evaluate_node(const OpticalConfig& base, double delta_p, double omega);

/// One record per node, row-major with delta_p as the outer index. Nodes are
/// evaluated on `threads` workers (0 = hardware concurrency); the output does
/// not depend on the thread count.
std::vector<SweepRecord> sweep_grid(const GridSpec& spec, unsigned threads = 0);

/// Omega/Gamma where U/J crosses (U/J)_c at fixed Delta_p. Bracketed root to
/// 1e-6 Gamma. Throws NoBracket or PoleError.
double find_mott_crossing(const OpticalConfig& base, double delta_p, std::pair<double, double> bracket);

struct PinningCrossing {
  double omega = 0;
  double gamma_abs = 0;
  double v1_over_er = 0;
};

/// Omega/Gamma where V1/E_R meets the sine-Gordon critical depth. Throws
/// RegimeError when no point of the bracket lies in the sine-Gordon window,
/// NoBracket without a sign change.
PinningCrossing find_pinning_crossing(const OpticalConfig& base, double delta_p,
                                      std::pair<double, double> bracket);

enum class BoundaryModel { BoseHubbard, SineGordon };
std::string_view to_string(BoundaryModel model) noexcept;

struct Polyline {
  BoundaryModel model = BoundaryModel::BoseHubbard;
  std::vector<Point2> vertices;  // x = Delta_p/Gamma, y = Omega/Gamma
};

/// Decision-function fields behind the classifier, one per model. Nodes
/// outside a model's validity window are NaN (masked).
ScalarGrid decision_field(const std::vector<SweepRecord>& records, const GridSpec& spec, BoundaryModel model);

/// Both transition lines over the grid, Bose-Hubbard polylines first.
/// Throws EmptyBoundary when neither model changes sign on the grid.
std::vector<Polyline> phase_boundaries(const GridSpec& spec, unsigned threads = 0);

}  // namespace fiberpol
