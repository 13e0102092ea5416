#include "fiberpol/many_body.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fiberpol/errors.hpp"

namespace fiberpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double luttinger_radicand(double gamma) { return gamma - std::pow(gamma, 1.5) / (2.0 * kPi); }

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Superfluid:
      return "SF";
    case Phase::MottPinnedSG:
      return "MOTT_SG";
    case Phase::MottBH:
      return "MOTT_BH";
    case Phase::Indeterminate:
      break;
  }
  return "INDETERMINATE";
}

double luttinger_k(double gamma_abs) {
  if (!(gamma_abs > 0.0)) throw DomainError("luttinger_k requires gamma > 0");
  if (gamma_abs > kLuttingerGammaMax) throw DomainError("luttinger_k is only valid for gamma <= 10");
  const double radicand = luttinger_radicand(gamma_abs);
  if (!(radicand > 0.0)) throw DomainError("non-positive radicand in luttinger_k");
  return kPi / std::sqrt(radicand);
}

double sg_critical_depth(double gamma_abs) {
  luttinger_k(gamma_abs);  // domain checks
  const double depth = 2.0 * kPi / std::sqrt(luttinger_radicand(gamma_abs)) - 4.0;
  return depth > 0.0 ? depth : 0.0;
}

BhParams bh_params(double v1_over_er, double gamma_abs) {
  if (!(v1_over_er > 0.0) || !std::isfinite(v1_over_er))
    throw DomainError("bh_params requires a positive lattice depth");
  if (!(gamma_abs >= 0.0)) throw DomainError("bh_params requires gamma >= 0");
  BhParams p;
  p.j_over_er = 4.0 * std::pow(v1_over_er, 0.75) * std::exp(-2.0 * std::sqrt(v1_over_er)) / std::sqrt(kPi);
  p.u_over_er = std::sqrt(2.0 / (kPi * kPi * kPi)) * std::pow(v1_over_er, 0.25) * gamma_abs;
  p.u_over_j = p.u_over_er / p.j_over_er;
  return p;
}

double u_over_j_closed_form(double v1_over_er, double gamma_abs) {
  if (!(v1_over_er > 0.0)) throw DomainError("u_over_j requires a positive lattice depth");
  return std::sqrt(2.0) * std::exp(2.0 * std::sqrt(v1_over_er)) * gamma_abs /
         (4.0 * kPi * std::sqrt(v1_over_er));
}

RegimeFlags regime_flags(double gamma_abs, double v1_over_er, bool sign_warning) {
  RegimeFlags f;
  f.sg_valid = gamma_abs >= 1.0 && gamma_abs <= 5.0 && v1_over_er <= 3.0;
  // The windows share the corner (1, 3); it belongs to the sine-Gordon side.
  f.bh_valid = !f.sg_valid && gamma_abs <= 1.0 && v1_over_er >= 3.0;
  f.k_formula_valid = gamma_abs > 0.0 && gamma_abs <= kLuttingerGammaMax;
  f.sign_warning = sign_warning;
  return f;
}

Phase classify(const ManyBodyPoint& point) {
  if (point.flags.bh_valid)
    return point.u_over_j >= kCriticalUOverJ ? Phase::MottBH : Phase::Superfluid;
  if (point.flags.sg_valid) {
    const bool pinned = point.v1_over_er > 0.0 && point.v1_over_er >= sg_critical_depth(point.gamma_abs);
    return pinned ? Phase::MottPinnedSG : Phase::Superfluid;
  }
  return Phase::Indeterminate;
}

ManyBodyPoint make_point(double gamma_signed, double v1_over_er) {
  if (!(v1_over_er >= 0.0) || !std::isfinite(v1_over_er))
    throw DomainError("lattice depth must be non-negative and finite");
  if (!std::isfinite(gamma_signed)) throw DomainError("gamma must be finite");

  ManyBodyPoint p;
  p.gamma_abs = std::abs(gamma_signed);
  p.v1_over_er = v1_over_er;
  p.flags = regime_flags(p.gamma_abs, v1_over_er, gamma_signed < 0.0);
  p.k_luttinger = p.flags.k_formula_valid ? luttinger_k(p.gamma_abs) : kNaN;
  if (v1_over_er > 0.0) {
    const BhParams bh = bh_params(v1_over_er, p.gamma_abs);
    p.j_over_er = bh.j_over_er;
    p.u_over_er = bh.u_over_er;
    p.u_over_j = bh.u_over_j;
  } else {
    p.j_over_er = 0.0;
    p.u_over_er = 0.0;
    p.u_over_j = kNaN;
  }
  p.phase = classify(p);
  return p;
}

}  // namespace fiberpol
