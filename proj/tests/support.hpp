#pragma once

#include <cmath>
#include <random>

#include "epictrl/epictrl.hpp"

namespace epictrl::testing {

inline ModelParams measles() { return {5.48e-5, 0.0, 3.288, 9.82e-2, 0.274, 1e6}; }
inline State measles_x0() { return {9.8e5, 1.5e4, 5000.0, 0.0, 0.0}; }

inline ModelParams influenza(double immunity_days) {
  return {1.0 / 25550.0, 1.0 / immunity_days, 1.66, 1.0 / 2.2, 1.0 / 2.2, 1000.0};
}
inline State influenza_x0() { return {980.0, 15.0, 5.0, 0.0, 0.0}; }

inline IntegrationConfig config(double horizon, double step = 0.01, std::size_t stride = 10) {
  IntegrationConfig c;
  c.horizon = horizon;
  c.step = step;
  c.record_stride = stride;
  return c;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Seeded generator of parameter sets and states at the scales the model is
/// used at.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  ModelParams params() {
    return {log_uniform(1e-6, 1e-1), uniform(0.0, 0.5), log_uniform(1e-3, 10.0), log_uniform(1e-2, 2.0),
            log_uniform(1e-2, 2.0), log_uniform(1e2, 1e7)};
  }

  /// A parameter set whose endemic point exists.
  ModelParams endemic_params() {
    for (;;) {
      ModelParams p = params();
      if (p.sigma * p.beta >= (p.mu + p.sigma) * (p.mu + p.gamma)) return p;
    }
  }

  State state_on_simplex(double n) {
    std::array<double, 4> w{};
    double tot = 0.0;
    for (double& v : w) tot += (v = -std::log(uniform(1e-12, 1.0)));
    return {w[0] / tot * n, w[1] / tot * n, w[2] / tot * n, w[3] / tot * n, 0.0};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace epictrl::testing
