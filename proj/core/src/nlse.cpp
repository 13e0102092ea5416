#include "fiberpol/nlse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fiberpol/errors.hpp"
#include "spectral.hpp"

namespace fiberpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBlowUpFactor = 1e6;

/// Precomputed grids plus a scratch spectral buffer for one parameter set.
class Propagator {
 public:
  explicit Propagator(const NlseParams& params)
      : params_(params), n_(static_cast<std::size_t>(params.grid_points)), fft_(n_), k2_(n_), lattice_(n_), density_(n_) {
    const double length = params.box_length();
    for (std::size_t m = 0; m < n_; ++m) {
      const double mode = m < n_ / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n_);
      const double k = 2.0 * kPi * mode / length;
      k2_[m] = k * k;
      const double c = std::cos(static_cast<double>(m) * params.spacing());
      lattice_[m] = c * c;
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// Multiplies the Fourier coefficients of psi by factor(k^2).
  template <class F>
  void kinetic(std::vector<Complex>& psi, F&& factor) {
    auto buf = fft_.data();
    std::copy(psi.begin(), psi.end(), buf.begin());
    fft_.forward();
    for (std::size_t m = 0; m < n_; ++m) buf[m] *= factor(k2_[m]);
    fft_.backward();
    std::copy(buf.begin(), buf.end(), psi.begin());
  }

  void real_time_step(std::vector<Complex>& psi, double t, double dt) {
    const ControlPoint c = params_.at(t + 0.5 * dt);
    const auto half_kinetic = [dt](double k2) { return std::polar(1.0, -k2 * 0.5 * dt); };
    kinetic(psi, half_kinetic);
    const double decay = std::exp(-0.5 * c.kappa * dt);
    // Integral of |psi|^2 over the step under pure exponential loss.
    const double loss_time = c.kappa > 0 ? -std::expm1(-c.kappa * dt) / c.kappa : dt;
    for (std::size_t j = 0; j < n_; ++j) {
      const double phase = c.s * lattice_[j] * dt + c.g * std::norm(psi[j]) * loss_time;
      psi[j] *= std::polar(decay, -phase);
    }
    kinetic(psi, half_kinetic);
  }

  void imaginary_time_step(std::vector<Complex>& psi, const ControlPoint& c, double dtau) {
    // The interaction uses the start-of-step density at unit mean, so the
    // fixed point is that of a linear Strang step for T + V + g rho and
    // carries an O(dtau^2) bias only.
    double mean = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      density_[j] = std::norm(psi[j]);
      mean += density_[j];
    }
    const double g = c.g * static_cast<double>(n_) / mean;
    const auto half_kinetic = [dtau](double k2) { return Complex(std::exp(-k2 * 0.5 * dtau), 0.0); };
    kinetic(psi, half_kinetic);
    for (std::size_t j = 0; j < n_; ++j) psi[j] *= std::exp(-(c.s * lattice_[j] + g * density_[j]) * dtau);
    kinetic(psi, half_kinetic);
  }

  Observables observe(const FieldState& state) {
    const ControlPoint c = params_.at(state.time);
    const auto& psi = state.psi;
    const double inv_n = 1.0 / static_cast<double>(n_);

    auto buf = fft_.data();
    std::copy(psi.begin(), psi.end(), buf.begin());
    fft_.forward();
    double kinetic_energy = 0;
    for (std::size_t m = 0; m < n_; ++m) kinetic_energy += k2_[m] * std::norm(buf[m]);
    kinetic_energy *= inv_n * inv_n;

    double norm = 0;
    double potential = 0;
    double interaction = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double rho = std::norm(psi[j]);
      norm += rho;
      potential += c.s * lattice_[j] * rho;
      interaction += 0.5 * c.g * rho * rho;
    }

    Observables obs;
    obs.tau = state.time;
    obs.norm = norm * inv_n;
    obs.energy = kinetic_energy + (potential + interaction) * inv_n;
    obs.contrast = period_contrast(psi);
    return obs;
  }

 private:
  // Averaging over translations by one lattice period keeps exactly the
  // Fourier modes that are multiples of n_periods.
  double period_contrast(const std::vector<Complex>& psi) {
    auto buf = fft_.data();
    for (std::size_t j = 0; j < n_; ++j) buf[j] = std::norm(psi[j]);
    fft_.forward();
    const auto periods = static_cast<long>(params_.n_periods);
    for (std::size_t m = 0; m < n_; ++m) {
      const long mode = m < n_ / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n_);
      if (mode % periods != 0) buf[m] = 0;
    }
    fft_.backward();
    double lo = buf[0].real();
    double hi = lo;
    for (const auto& z : buf) {
      lo = std::min(lo, z.real());
      hi = std::max(hi, z.real());
    }
    lo = std::max(lo, 0.0);
    if (hi <= 0.0) return 0.0;
    return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
  }

  const NlseParams& params_;
  std::size_t n_;
  detail::SpectralBuffer fft_;
  std::vector<double> k2_;
  std::vector<double> lattice_;
  std::vector<double> density_;
};

void normalise(std::vector<Complex>& psi) {
  double mean = 0;
  for (const auto& z : psi) mean += std::norm(z);
  mean /= static_cast<double>(psi.size());
  if (!(mean > 0) || !std::isfinite(mean)) throw NonFinite("state norm is zero or not finite");
  const double scale = 1.0 / std::sqrt(mean);
  for (auto& z : psi) z *= scale;
}

double max_amplitude(const std::vector<Complex>& psi) {
  double m = 0;
  for (const auto& z : psi) m = std::max(m, std::abs(z));
  return m;
}

void check_state(const FieldState& state, const NlseParams& params) {
  if (state.psi.size() != static_cast<std::size_t>(params.grid_points))
    throw DomainError("state size does not match grid_points");
  double norm = 0;
  for (const auto& z : state.psi) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFinite("initial state has non-finite entries");
    norm += std::norm(z);
  }
  if (!(norm > 0)) throw DomainError("initial state has zero norm");
}

}  // namespace

double nlse_interaction(double gamma_abs) { return 4.0 * gamma_abs / (kPi * kPi); }

void NlseParams::validate() const {
  if (grid_points < 16 || !std::has_single_bit(static_cast<unsigned>(grid_points)))
    throw DomainError("grid_points must be a power of two >= 16");
  if (n_periods < 1) throw DomainError("n_periods must be >= 1");
  if (!(v1_over_er >= 0) || !(g_int >= 0) || !(kappa_dimless >= 0))
    throw DomainError("lattice depth, interaction and loss must be non-negative");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const ControlPoint& c = schedule[i];
    if (!(c.s >= 0) || !(c.g >= 0) || !(c.kappa >= 0)) throw DomainError("schedule values must be non-negative");
    if (i > 0 && !(c.time >= schedule[i - 1].time)) throw DomainError("schedule times must be non-decreasing");
  }
}

ControlPoint NlseParams::at(double tau) const {
  if (schedule.empty()) return {tau, v1_over_er, g_int, kappa_dimless};
  if (tau <= schedule.front().time) return {tau, schedule.front().s, schedule.front().g, schedule.front().kappa};
  if (tau >= schedule.back().time) return {tau, schedule.back().s, schedule.back().g, schedule.back().kappa};
  const auto upper = std::upper_bound(schedule.begin(), schedule.end(), tau,
                                      [](double t, const ControlPoint& c) { return t < c.time; });
  const ControlPoint& b = *upper;
  const ControlPoint& a = *(upper - 1);
  const double w = (tau - a.time) / (b.time - a.time);
  return {tau, a.s + w * (b.s - a.s), a.g + w * (b.g - a.g), a.kappa + w * (b.kappa - a.kappa)};
}

double NlseParams::box_length() const { return kPi * static_cast<double>(n_periods); }

double NlseParams::spacing() const { return box_length() / static_cast<double>(grid_points); }

FieldState uniform_state(const NlseParams& params) {
  params.validate();
  return {std::vector<Complex>(static_cast<std::size_t>(params.grid_points), Complex(1.0, 0.0)), 0.0};
}

FieldState gaussian_state(const NlseParams& params, double centre, double width, double k0) {
  params.validate();
  if (!(width > 0)) throw DomainError("gaussian width must be positive");
  FieldState s;
  s.psi.resize(static_cast<std::size_t>(params.grid_points));
  const double h = params.spacing();
  for (std::size_t j = 0; j < s.psi.size(); ++j) {
    const double x = static_cast<double>(j) * h;
    const double d = x - centre;
    s.psi[j] = std::polar(std::exp(-d * d / (2.0 * width * width)), k0 * x);
  }
  normalise(s.psi);
  return s;
}

Observables measure(const FieldState& state, const NlseParams& params) {
  params.validate();
  check_state(state, params);
  Propagator prop(params);
  return prop.observe(state);
}

Trajectory evolve(const FieldState& state, const NlseParams& params, double dt, long steps, long sample_every) {
  params.validate();
  check_state(state, params);
  if (!(dt > 0)) throw DomainError("dt must be positive");
  if (steps < 0) throw DomainError("steps must be non-negative");
  if (sample_every < 1) sample_every = 1;

  Propagator prop(params);
  Trajectory out;
  out.state = state;
  out.series.push_back(prop.observe(out.state));

  const double limit = kBlowUpFactor * max_amplitude(state.psi);
  const double t0 = state.time;
  for (long step = 1; step <= steps; ++step) {
    const double t = t0 + static_cast<double>(step - 1) * dt;
    prop.real_time_step(out.state.psi, t, dt);
    out.state.time = t0 + static_cast<double>(step) * dt;
    for (const auto& z : out.state.psi) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NonFinite("non-finite amplitude at tau = " + std::to_string(out.state.time));
      if (std::abs(z) > limit) throw BlowUp("amplitude exceeded 1e6 x initial maximum at tau = " +
                                            std::to_string(out.state.time));
    }
    if (step % sample_every == 0 || step == steps) out.series.push_back(prop.observe(out.state));
  }
  return out;
}

FieldState ground_state(const NlseParams& params, double tol, const GroundStateOptions& options) {
  params.validate();
  const ControlPoint c = params.at(0.0);
  if (c.kappa != 0.0) throw DomainError("ground_state requires zero loss");
  if (!(tol > 0) || !(options.dtau > 0)) throw DomainError("tolerance and dtau must be positive");

  Propagator prop(params);
  FieldState state = uniform_state(params);
  const long check = std::max(1L, options.check_every);
  double dtau = options.dtau;
  for (int stage = 0; stage <= std::max(0, options.refinements); ++stage, dtau /= 4.0) {
    double previous = prop.observe(state).energy;
    bool converged = false;
    for (long it = 1; it <= options.max_iterations && !converged; ++it) {
      prop.imaginary_time_step(state.psi, c, dtau);
      normalise(state.psi);
      if (it % check != 0) continue;
      const double energy = prop.observe(state).energy;
      if (!std::isfinite(energy)) throw NonFinite("energy diverged during imaginary-time relaxation");
      converged = std::abs(energy - previous) <= tol * std::max(std::abs(energy), 1.0);
      previous = energy;
    }
    if (!converged) throw NoConvergence("imaginary-time relaxation did not reach the energy tolerance");
  }
  return state;
}

ReleaseProfile release_profile(const FieldState& state, const NlseParams& params, double v_g, double e_recoil,
                               double n_ph) {
  params.validate();
  check_state(state, params);
  if (!(v_g > 0) || !(e_recoil > 0) || !(n_ph > 0)) throw DomainError("v_g, e_recoil and n_ph must be positive");
  const double to_seconds = 1.0 / (kPi * n_ph * v_g);  // per unit of xi
  ReleaseProfile out;
  out.time_step = params.spacing() * to_seconds;
  const double start = state.time / e_recoil;
  out.time.resize(state.psi.size());
  out.intensity.resize(state.psi.size());
  for (std::size_t j = 0; j < state.psi.size(); ++j) {
    out.time[j] = start + static_cast<double>(j) * out.time_step;
    out.intensity[j] = std::norm(state.psi[j]);
  }
  return out;
}

}  // namespace fiberpol
