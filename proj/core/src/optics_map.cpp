#include "fiberpol/optics_map.hpp"

#include <cmath>
#include <numbers>

#include "fiberpol/errors.hpp"

namespace fiberpol {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0) || !std::isfinite(value))
    throw DomainError(std::string(name) + " must be positive and finite");
}

double group_velocity(const OpticalConfig& cfg) {
  const double omega = cfg.omega * cfg.gamma_total;
  const double gamma_1d = cfg.gamma_1d_ratio * cfg.gamma_total;
  return 4.0 * omega * omega / (gamma_1d * cfg.n0);
}

EffectiveParams assemble(const OpticalConfig& cfg, double v_g) {
  const double gamma = cfg.gamma_total;
  const double gamma_1d = cfg.gamma_1d_ratio * gamma;
  const double delta0 = cfg.delta0 * gamma;
  const double delta = cfg.delta_small * gamma;
  const double delta_p = cfg.delta_p * gamma;
  const double omega2 = cfg.omega * cfg.omega * gamma * gamma;
  const double n1 = cfg.n1_fraction * cfg.n0;

  EffectiveParams p;
  p.lambda_factor = lambda_factor(cfg);
  p.xi_factor = xi_factor(cfg);
  p.v_g = v_g;

  const double dispersion = -cfg.delta_omega / (2.0 * cfg.v * v_g);
  const double mass_real = dispersion - gamma_1d * cfg.n0 / (4.0 * delta0 * v_g);
  const std::complex<double> mass_lossy =
      dispersion - gamma_1d * cfg.n0 / std::complex<double>(4.0 * delta0 * v_g, 2.0 * gamma * v_g);
  if (std::abs(mass_real) < kMassEpsilon || !std::isfinite(mass_real))
    throw SingularMass("effective mass vanishes for this configuration");
  p.mass = {mass_real, mass_lossy.imag()};

  const double trap = p.lambda_factor * gamma_1d * delta * v_g / (4.0 * omega2);
  p.v0 = (cfg.delta_omega * v_g / cfg.v - trap * cfg.n0) / gamma;
  p.v1 = 0.0 - trap * n1 / gamma;  // +0 rather than -0 without modulation
  p.chi = p.lambda_factor * p.lambda_factor * p.xi_factor * gamma_1d * v_g / (2.0 * delta_p) / gamma;

  const double k_lattice = lattice_wavevector(cfg);
  p.e_recoil = k_lattice * k_lattice / (2.0 * std::abs(mass_real)) / gamma;
  p.kappa = cfg.n_ph * cfg.n_ph * v_g * gamma / (cfg.n0 * gamma_1d);
  p.od = cfg.n0 * cfg.fiber_length * cfg.gamma_1d_ratio;
  return p;
}

}  // namespace

double lambda_factor(const OpticalConfig& cfg) {
  const double omega2 = cfg.omega * cfg.omega;
  const double denom = omega2 - cfg.delta_small * cfg.delta0 / 2.0;
  if (std::abs(denom) <= kPoleEpsilon)
    throw PoleError("Omega^2 = delta*Delta_0/2 (Lambda pole)");
  return omega2 / denom;
}

double xi_factor(const OpticalConfig& cfg) {
  const double denom = cfg.delta_p - cfg.delta_small;
  if (std::abs(denom) <= kPoleEpsilon) throw PoleError("Delta_p = delta (Xi pole)");
  return (cfg.delta_p - cfg.delta_small / 2.0) / denom;
}

double lattice_wavevector(const OpticalConfig& cfg) { return std::numbers::pi * cfg.n_ph; }

ValidatedConfig validate_config(const OpticalConfig& cfg) {
  require_positive(cfg.gamma_total, "gamma_total");
  require_positive(cfg.gamma_1d_ratio, "gamma_1d_ratio");
  if (cfg.gamma_1d_ratio > 1.0) throw DomainError("gamma_1d_ratio must not exceed 1");
  require_positive(cfg.n0, "n0");
  require_positive(cfg.n_ph, "n_ph");
  require_positive(cfg.v, "v");
  require_positive(cfg.fiber_length, "fiber_length");
  require_positive(cfg.omega, "omega");
  if (!std::isfinite(cfg.delta0) || cfg.delta0 == 0.0) throw DomainError("delta0 must be finite and non-zero");
  if (!std::isfinite(cfg.delta_small) || !std::isfinite(cfg.delta_p) || !std::isfinite(cfg.delta_omega))
    throw DomainError("detunings must be finite");
  if (std::abs(cfg.delta_p) <= kPoleEpsilon) throw PoleError("Delta_p = 0 (interaction pole)");
  if (!(cfg.n1_fraction >= 0.0) || !(cfg.n1_fraction < 1.0))
    throw DomainError("n1_fraction must lie in [0, 1)");

  // Pole checks throw PoleError.
  lambda_factor(cfg);
  xi_factor(cfg);

  std::vector<std::string> warnings;
  if (cfg.n1_fraction > 0.5)
    warnings.emplace_back("ModulationWarning: n1/n0 = " + std::to_string(cfg.n1_fraction) +
                          " is not a small perturbation of the atomic density");

  if (!(group_velocity(cfg) < cfg.v))
    throw DomainError("group velocity must stay below the empty-waveguide light speed");
  return ValidatedConfig(cfg, std::move(warnings));
}

EffectiveParams effective_params(const ValidatedConfig& cfg) {
  return assemble(cfg.config(), group_velocity(cfg.config()));
}

EffectiveParams effective_params_at_group_velocity(const ValidatedConfig& cfg, double v_g) {
  require_positive(v_g, "v_g");
  return assemble(cfg.config(), v_g);
}

LiebLinigerGamma lieb_liniger_gamma(const OpticalConfig& cfg) {
  const double lambda = lambda_factor(cfg);
  const double xi = xi_factor(cfg);
  if (std::abs(cfg.delta_p) <= kPoleEpsilon) throw PoleError("Delta_p = 0 (interaction pole)");
  const double g1d = cfg.gamma_1d_ratio;
  return {-(lambda * lambda * xi / 8.0) * (g1d * g1d / (cfg.delta0 * cfg.delta_p)) * (cfg.n0 / cfg.n_ph)};
}

LiebLinigerGamma lieb_liniger_gamma(const ValidatedConfig& cfg) { return lieb_liniger_gamma(cfg.config()); }

double lattice_depth_ratio(const ValidatedConfig& validated) {
  const OpticalConfig& cfg = validated.config();
  const double lambda = lambda_factor(cfg);
  const double g1d = cfg.gamma_1d_ratio;
  const double n1 = cfg.n1_fraction * cfg.n0;
  return lambda / (8.0 * std::numbers::pi * std::numbers::pi) * (g1d * g1d / (cfg.omega * cfg.omega)) *
         (cfg.delta_small / cfg.delta0) * (cfg.n0 * n1 / (cfg.n_ph * cfg.n_ph));
}

}  // namespace fiberpol
