#pragma once

// Maps the quantum-optics control knobs of a cold-atom hollow-core fiber onto
// the effective single-polariton and interaction parameters.
//
// Units: hbar = 1. Detunings and the Rabi frequency are given relative to the
// total decay rate Gamma; Gamma itself, delta_omega and the derived rates are
// in 1/s. Effective energies are reported in units of hbar*Gamma.

#include <complex>
#include <string>
#include <vector>

namespace fiberpol {

inline constexpr double kPoleEpsilon = 1e-9;    // Gamma^2 units
inline constexpr double kMassEpsilon = 1e-30;   // s/m^2
inline constexpr double kSpeedOfLight = 2.99792458e8;

struct OpticalConfig {
  double gamma_total = 2e7;      // 1/s
  double gamma_1d_ratio = 0.2;   // Gamma_1D / Gamma
  double delta0 = 5.0;           // Delta_0 / Gamma
  double delta_small = 0.01;     // delta / Gamma
  double delta_p = 10.0;         // Delta_p / Gamma
  double omega = 1.0;            // Omega / Gamma
  double n0 = 1e7;               // 1/m
  double n1_fraction = 0.1;      // n_1 / n_0
  double n_ph = 1e3;             // 1/m
  double delta_omega = 0.0;      // 1/s
  double v = kSpeedOfLight;      // m/s
  double fiber_length = 0.01;    // m

  /// Reference densities, rates and detunings.
  static OpticalConfig baseline() { return {}; }
};

/// An OpticalConfig that has passed validate_config. Only validate_config
/// constructs one; non-fatal findings are kept in warnings().
class ValidatedConfig {
 public:
  const OpticalConfig& config() const noexcept { return cfg_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  friend ValidatedConfig validate_config(const OpticalConfig&);
  ValidatedConfig(OpticalConfig cfg, std::vector<std::string> warnings)
      : cfg_(cfg), warnings_(std::move(warnings)) {}

  OpticalConfig cfg_;
  std::vector<std::string> warnings_;
};

struct EffectiveParams {
  double lambda_factor = 0;  // Lambda
  double xi_factor = 0;      // Xi
  double v_g = 0;            // m/s
  // Real part from the lossless mass; imaginary part from the spontaneous
  // emission correction. s/m^2 with hbar = 1.
  std::complex<double> mass;
  double v0 = 0;             // hbar*Gamma
  double v1 = 0;             // hbar*Gamma
  double chi = 0;            // hbar*Gamma*m
  double e_recoil = 0;       // hbar*Gamma
  double kappa = 0;          // 1/s
  double od = 0;

  double mass_real() const noexcept { return mass.real(); }
};

struct LiebLinigerGamma {
  double value = 0;  // signed, as produced by the closed form

  double magnitude() const noexcept { return value < 0 ? -value : value; }
  bool negative() const noexcept { return value < 0; }
};

/// Throws PoleError near the Lambda or Xi poles, DomainError for
/// non-physical rates, densities or geometry. A modulation above half the
/// mean density is accepted with a warning.
ValidatedConfig validate_config(const OpticalConfig& cfg);

/// Lambda = Omega^2 / (Omega^2 - delta*Delta_0/2). Throws PoleError.
double lambda_factor(const OpticalConfig& cfg);
/// Xi = (Delta_p - delta/2) / (Delta_p - delta). Throws PoleError.
double xi_factor(const OpticalConfig& cfg);

EffectiveParams effective_params(const ValidatedConfig& cfg);

/// Same as effective_params but with the group velocity pinned to a value
/// (the loss rate and every v_g-dependent field follow it).
EffectiveParams effective_params_at_group_velocity(const ValidatedConfig& cfg, double v_g);

/// Lieb-Liniger ratio from its closed form in the control parameters.
LiebLinigerGamma lieb_liniger_gamma(const ValidatedConfig& cfg);
/// Closed form without the config invariants (only the poles are checked),
/// e.g. for Gamma_1D = 0.
LiebLinigerGamma lieb_liniger_gamma(const OpticalConfig& cfg);

/// Lattice depth in recoil units from its closed form.
double lattice_depth_ratio(const ValidatedConfig& cfg);

/// Lattice wavevector pi * n_ph of the cos^2(pi n_ph z) modulation.
double lattice_wavevector(const OpticalConfig& cfg);

}  // namespace fiberpol
