#pragma once

// Hand-rolled generators for property tests. Seeds are fixed so failures
// reproduce; the case index is reported by the callers.

#include <cmath>
#include <cstdint>
#include <random>

#include "fiberpol/errors.hpp"
#include "fiberpol/optics_map.hpp"

namespace fiberpol::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// A config that passes validate_config, with delta_omega = 0.
  ValidatedConfig valid_config() {
    for (;;) {
      OpticalConfig c;
      c.gamma_total = log_uniform(1e6, 1e9);
      c.gamma_1d_ratio = uniform(0.01, 1.0);
      c.delta0 = uniform(0.5, 50.0);
      c.delta_small = uniform(-0.1, 0.1);
      c.delta_p = uniform(1.0, 200.0);
      c.omega = uniform(0.3, 5.0);
      c.n0 = log_uniform(1e5, 1e9);
      c.n1_fraction = uniform(0.0, 0.5);
      c.n_ph = log_uniform(1e2, 1e4);
      c.delta_omega = 0.0;
      c.fiber_length = log_uniform(1e-3, 1e-1);
      if (std::abs(c.omega * c.omega - c.delta_small * c.delta0 / 2.0) < 1e-3) continue;
      try {
        return validate_config(c);
      } catch (const Error&) {
      }
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace fiberpol::testing
