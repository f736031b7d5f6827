#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "epictrl/error.hpp"
#include "epictrl/model.hpp"

namespace epictrl {

enum class EquilibriumKind { DiseaseFree, Endemic };

/// Fixed point of the vaccination-free model, in people.
struct EquilibriumPoint {
  double s = 0.0;
  double e = 0.0;
  double i = 0.0;
  double r = 0.0;
  EquilibriumKind kind = EquilibriumKind::DiseaseFree;
  /// sigma beta equals (mu + sigma)(mu + gamma) to 1e-12 relative; the
  /// endemic point collapses onto the disease-free one.
  bool degenerate = false;

  State as_state() const { return {s, e, i, r, 0.0}; }
};

inline EquilibriumPoint disease_free(const ModelParams& p) {
  return {p.n_total, 0.0, 0.0, 0.0, EquilibriumKind::DiseaseFree, false};
}

/// sigma beta / ((mu + sigma)(mu + gamma)); the endemic point exists iff
/// this is at least one.
inline double reproduction_ratio(const ModelParams& p) {
  const double denom = (p.mu + p.sigma) * (p.mu + p.gamma);
  if (denom == 0.0)
    throw Error(ErrorCode::DegenerateRates, "equilibria", "reproduction_ratio",
                detail::cat("(mu+sigma)(mu+gamma) = 0 with mu = ", p.mu, ", gamma = ", p.gamma));
  return p.sigma * p.beta / denom;
}

/// Endemic equilibrium, absent when (mu + sigma)(mu + gamma) > sigma beta.
inline std::optional<EquilibriumPoint> endemic(const ModelParams& p) {
  const double mu = p.mu, om = p.omega, be = p.beta, sg = p.sigma, gm = p.gamma, n = p.n_total;
  const double threshold = (mu + sg) * (mu + gm);
  const double drive = sg * be;
  if (threshold > drive) return std::nullopt;

  const double excess = drive - threshold;
  const double coupling = (mu + gm + sg) * (mu + om) + gm * sg;
  EquilibriumPoint pt;
  pt.kind = EquilibriumKind::Endemic;
  pt.degenerate = std::abs(excess) <= 1e-12 * std::max(drive, threshold);
  if (excess == 0.0) {
    pt.s = n;
    pt.degenerate = true;
    return pt;
  }
  pt.s = threshold / drive * n;
  pt.i = (mu + om) * excess / (be * coupling) * n;
  pt.r = gm * excess / (be * coupling) * n;
  pt.e = (mu + gm) * (mu + om) * excess / (drive * coupling) * n;
  return pt;
}

/// Largest absolute left-hand side of the vaccination-free fixed-point
/// equations of the reduced (S, I, R) system at `pt`.
inline double residual(const ModelParams& p, const EquilibriumPoint& pt) {
  const double n = p.n_total;
  const double rs = -p.mu * pt.s + p.omega * pt.r - p.beta * pt.s * pt.i / n + p.mu * n;
  const double ri = -(p.mu + p.gamma + p.sigma) * pt.i + p.sigma * (n - pt.s - pt.r);
  const double rr = -(p.mu + p.omega) * pt.r + p.gamma * pt.i;
  return std::max({std::abs(rs), std::abs(ri), std::abs(rr)});
}

}  // namespace epictrl
