#pragma once

// Mean-field (Gross-Pitaevskii) dynamics of the trapped polariton field in
// lattice units: xi = pi n_ph z, tau = E_R t, so that
//
//   i d(psi)/d(tau) = [ -d^2/dxi^2 + s cos^2(xi) + g |psi|^2 ] psi - i (kappa/2) psi
//
// with s = V1/E_R, g = 4|gamma|/pi^2 for |psi|^2 of unit spatial mean, and
// kappa the loss rate in recoil units. The box is periodic and holds an
// integer number of lattice periods.

#include <complex>
#include <cstddef>
#include <vector>

namespace fiberpol {

using Complex = std::complex<double>;

/// Interaction strength in lattice units for a given Lieb-Liniger ratio.
double nlse_interaction(double gamma_abs);

struct ControlPoint {
  double time = 0;
  double s = 0;
  double g = 0;
  double kappa = 0;
};

struct NlseParams {
  double v1_over_er = 0;
  double g_int = 0;
  double kappa_dimless = 0;
  int n_periods = 8;
  int grid_points = 256;
  // Piecewise-linear ramps of (s, g, kappa); held constant outside the
  // listed times. Empty means the constant values above.
  std::vector<ControlPoint> schedule;

  void validate() const;
  ControlPoint at(double tau) const;
  double box_length() const;  // pi * n_periods
  double spacing() const;     // box_length / grid_points
};

struct FieldState {
  std::vector<Complex> psi;
  double time = 0;
};

struct Observables {
  double tau = 0;
  double norm = 0;      // spatial mean of |psi|^2
  double energy = 0;    // Gross-Pitaevskii energy per unit length
  double contrast = 0;  // (max - min)/(max + min) of the period-averaged density
};

FieldState uniform_state(const NlseParams& params);
/// psi = exp(-(xi - centre)^2 / (2 width^2) + i k0 xi), scaled to unit mean density.
FieldState gaussian_state(const NlseParams& params, double centre, double width, double k0 = 0.0);

Observables measure(const FieldState& state, const NlseParams& params);

struct Trajectory {
  FieldState state;
  std::vector<Observables> series;  // initial state first, then every sample_every steps
};

/// Strang split-step: half kinetic step in Fourier space, full
/// potential + nonlinear + loss step in real space, half kinetic step.
/// Throws BlowUp when |psi| exceeds 1e6 times its initial maximum and
/// NonFinite on NaN/Inf.
Trajectory evolve(const FieldState& state, const NlseParams& params, double dt, long steps, long sample_every = 1);

struct GroundStateOptions {
  double dtau = 5e-3;
  // The split-step fixed point is biased by O(dtau^2); each refinement
  // restarts from the converged state with dtau / 4.
  int refinements = 2;
  long max_iterations = 2'000'000;  // per stage
  long check_every = 20;
};

/// Imaginary-time relaxation from the uniform state with renormalisation to
/// unit mean density after every step. A stage stops when the energy changes
/// by less than tol (relative, absolute near zero) between checks. Requires
/// zero loss.
FieldState ground_state(const NlseParams& params, double tol, const GroundStateOptions& options = {});

struct ReleaseProfile {
  std::vector<double> time;       // s
  std::vector<double> intensity;  // |psi|^2 at the matching position
  double time_step = 0;           // s between samples
};

/// Zeroth-order release model: the sample at xi leaves the fiber at
/// t = tau/E_R + xi / (pi n_ph v_g). The sum of intensity * time_step equals
/// the state norm times the box transit time. e_recoil is in 1/s (hbar = 1).
ReleaseProfile release_profile(const FieldState& state, const NlseParams& params, double v_g, double e_recoil,
                               double n_ph);

}  // namespace fiberpol
