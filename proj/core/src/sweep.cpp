#include "fiberpol/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "fiberpol/errors.hpp"

namespace fiberpol {

namespace {

constexpr double kRootTolerance = 1e-6;
constexpr int kRegimeSamples = 65;

struct NodeValues {
  double gamma_signed;
  double v1_over_er;
};

NodeValues node_values(const OpticalConfig& base, double delta_p, double omega) {
  OpticalConfig cfg = base;
  cfg.delta_p = delta_p;
  cfg.omega = omega;
  const ValidatedConfig valid = validate_config(cfg);
  return {lieb_liniger_gamma(valid).value, lattice_depth_ratio(valid)};
}

void check_bracket(const OpticalConfig& base, std::pair<double, double> bracket) {
  const auto [lo, hi] = bracket;
  if (!(lo < hi)) throw NoBracket("empty bracket");
  const double pole = std::sqrt(std::max(0.0, base.delta_small * base.delta0 / 2.0));
  if (pole >= lo - kPoleEpsilon && pole <= hi + kPoleEpsilon)
    throw PoleError("bracket touches the Lambda pole at Omega/Gamma = " + std::to_string(pole));
}

template <class F>
double bracketed_root(F&& f, double lo, double hi) {
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0) == (f_hi < 0)) throw NoBracket("no sign change over the bracket");
  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= kRootTolerance / 4.0; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  if (!tol(a, b)) throw NoConvergence("root bracket did not shrink below tolerance");
  return 0.5 * (a + b);
}

}  // namespace

double AxisRange::at(int i) const {
  if (i == count - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> AxisRange::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = at(i);
  return out;
}

void GridSpec::validate() const {
  for (const AxisRange* axis : {&delta_p, &omega}) {
    if (axis->count < 2) throw ConfigError("each sweep axis needs at least 2 points");
    if (!(axis->min < axis->max) || !std::isfinite(axis->min) || !std::isfinite(axis->max))
      throw ConfigError("sweep axis must satisfy min < max");
  }
  OpticalConfig probe = base;
  probe.delta_p = delta_p.min;
  probe.omega = omega.max;
  try {
    validate_config(probe);
  } catch (const PoleError&) {
    // Pole-adjacent nodes become gap records; the rest of the base is fine.
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid base optics: ") + e.what());
  }
}

SweepRecord evaluate_node(const OpticalConfig& base, double delta_p, double omega) {
  SweepRecord r;
  r.delta_p = delta_p;
  r.omega = omega;
  try {
    OpticalConfig cfg = base;
    cfg.delta_p = delta_p;
    cfg.omega = omega;
    const ValidatedConfig valid = validate_config(cfg);
    const EffectiveParams eff = effective_params(valid);
    r.gamma_signed = lieb_liniger_gamma(valid).value;
    r.point = make_point(r.gamma_signed, lattice_depth_ratio(valid));
    r.v_g = eff.v_g;
    r.kappa = eff.kappa;
  } catch (const Error& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.gamma_signed = nan;
    r.point = ManyBodyPoint{nan, nan, nan, nan, nan, nan, Phase::Indeterminate, {}};
    r.v_g = nan;
    r.kappa = nan;
    r.error = e.what();
  }
  return r;
}

std::vector<SweepRecord> sweep_grid(const GridSpec& spec, unsigned threads) {
  spec.validate();
  const std::vector<double> dps = spec.delta_p.values();
  const std::vector<double> omegas = spec.omega.values();
  const std::size_t total = dps.size() * omegas.size();
  std::vector<SweepRecord> records(total);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  auto work = [&](unsigned worker) {
    for (std::size_t k = worker; k < total; k += threads)
      records[k] = evaluate_node(spec.base, dps[k / omegas.size()], omegas[k % omegas.size()]);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
  }
  return records;
}

double find_mott_crossing(const OpticalConfig& base, double delta_p, std::pair<double, double> bracket) {
  check_bracket(base, bracket);
  auto excess = [&](double omega) {
    const NodeValues n = node_values(base, delta_p, omega);
    return bh_params(n.v1_over_er, std::abs(n.gamma_signed)).u_over_j - kCriticalUOverJ;
  };
  return bracketed_root(excess, bracket.first, bracket.second);
}

PinningCrossing find_pinning_crossing(const OpticalConfig& base, double delta_p,
                                      std::pair<double, double> bracket) {
  check_bracket(base, bracket);
  bool any_valid = false;
  for (int i = 0; i < kRegimeSamples && !any_valid; ++i) {
    const double omega = bracket.first + (bracket.second - bracket.first) * i / (kRegimeSamples - 1);
    const NodeValues n = node_values(base, delta_p, omega);
    any_valid = regime_flags(std::abs(n.gamma_signed), n.v1_over_er).sg_valid;
  }
  if (!any_valid) throw RegimeError("bracket lies outside the sine-Gordon window (1 <= |gamma| <= 5, V1/E_R <= 3)");

  auto excess = [&](double omega) {
    const NodeValues n = node_values(base, delta_p, omega);
    return n.v1_over_er - sg_critical_depth(std::abs(n.gamma_signed));
  };
  PinningCrossing c;
  c.omega = bracketed_root(excess, bracket.first, bracket.second);
  const NodeValues n = node_values(base, delta_p, c.omega);
  c.gamma_abs = std::abs(n.gamma_signed);
  c.v1_over_er = n.v1_over_er;
  return c;
}

std::string_view to_string(BoundaryModel model) noexcept {
  return model == BoundaryModel::BoseHubbard ? "BH" : "SG";
}

ScalarGrid decision_field(const std::vector<SweepRecord>& records, const GridSpec& spec, BoundaryModel model) {
  ScalarGrid g;
  g.xs = spec.delta_p.values();
  g.ys = spec.omega.values();
  if (records.size() != g.xs.size() * g.ys.size())
    throw std::invalid_argument("decision_field: record count does not match the grid");
  g.values.resize(records.size());
  g.inside.resize(records.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < records.size(); ++k) {
    const SweepRecord& r = records[k];
    const ManyBodyPoint& p = r.point;
    double value = nan;
    bool inside = false;
    if (r.ok() && model == BoundaryModel::BoseHubbard && p.flags.bh_valid) {
      value = p.u_over_j - kCriticalUOverJ;
      inside = value >= 0.0;
    } else if (r.ok() && model == BoundaryModel::SineGordon && p.flags.sg_valid) {
      value = p.v1_over_er - sg_critical_depth(p.gamma_abs);
      inside = p.v1_over_er > 0.0 && value >= 0.0;
    }
    g.values[k] = value;
    g.inside[k] = inside ? 1 : 0;
  }
  return g;
}

std::vector<Polyline> phase_boundaries(const GridSpec& spec, unsigned threads) {
  const std::vector<SweepRecord> records = sweep_grid(spec, threads);
  std::vector<Polyline> out;
  for (BoundaryModel model : {BoundaryModel::BoseHubbard, BoundaryModel::SineGordon}) {
    for (auto& line : marching_squares(decision_field(records, spec, model)))
      out.push_back({model, std::move(line)});
  }
  if (out.empty()) throw EmptyBoundary("no phase boundary crosses the grid");
  return out;
}

}  // namespace fiberpol
