#pragma once

// Sine-Gordon and Bose-Hubbard descriptions of the trapped polariton gas in
// terms of the Lieb-Liniger ratio |gamma| and the lattice depth V1/E_R.

#include <string_view>

namespace fiberpol {

/// Critical Bose-Hubbard ratio (U/J)_c.
inline constexpr double kCriticalUOverJ = 3.85;
/// Upper end of the range where the K(gamma) relation holds.
inline constexpr double kLuttingerGammaMax = 10.0;

enum class Phase { Superfluid, MottPinnedSG, MottBH, Indeterminate };

/// "SF", "MOTT_SG", "MOTT_BH" or "INDETERMINATE".
std::string_view to_string(Phase phase) noexcept;

struct RegimeFlags {
  bool sg_valid = false;         // 1 <= |gamma| <= 5 and V1/E_R <= 3
  bool bh_valid = false;         // |gamma| <= 1 and V1/E_R >= 3
  bool k_formula_valid = false;  // 0 < |gamma| <= 10
  bool sign_warning = false;     // the closed-form gamma came out negative
};

struct ManyBodyPoint {
  double gamma_abs = 0;
  double v1_over_er = 0;
  double k_luttinger = 0;  // NaN outside the K(gamma) domain
  double j_over_er = 0;
  double u_over_er = 0;
  double u_over_j = 0;     // NaN without a lattice
  Phase phase = Phase::Indeterminate;
  RegimeFlags flags;
};

struct BhParams {
  double j_over_er = 0;
  double u_over_er = 0;
  double u_over_j = 0;
};

/// K = pi / sqrt(gamma - gamma^{3/2}/(2 pi)), valid for 0 < gamma <= 10.
double luttinger_k(double gamma_abs);

/// Lattice depth above which the sine-Gordon gas is pinned, clamped at 0.
double sg_critical_depth(double gamma_abs);

/// Tight-binding hopping and on-site interaction in recoil units.
BhParams bh_params(double v1_over_er, double gamma_abs);

/// Closed form of U/J in terms of depth and gamma (same quantity as
/// bh_params().u_over_j, written as a single expression).
double u_over_j_closed_form(double v1_over_er, double gamma_abs);

RegimeFlags regime_flags(double gamma_abs, double v1_over_er, bool sign_warning = false);

/// Points exactly on a critical line are labelled Mott.
Phase classify(const ManyBodyPoint& point);

/// Fills every field of a ManyBodyPoint from the signed gamma and the depth,
/// including the phase label. Throws DomainError for a negative depth.
ManyBodyPoint make_point(double gamma_signed, double v1_over_er);

}  // namespace fiberpol
