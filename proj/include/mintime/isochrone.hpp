#ifndef MINTIME_ISOCHRONE_HPP
#define MINTIME_ISOCHRONE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "mintime/characteristics.hpp"
#include "mintime/synthesis.hpp"

namespace mintime {

struct IsochronePoint {
  double param = 0.0;  // anchor angle or side parameter
  State x;
  std::string family;
  BoundaryPoint anchor;
};

/// Level set {value = tau}, ordered by anchor within each family.
struct Isochrone {
  double tau = 0.0;
  std::vector<IsochronePoint> points;
};

/// Closed-form level curve for the circle (alpha = 1), six branches split at
/// the switch angles pi - phi and 2 pi - phi, phi = atan(tau).
inline Isochrone isochrone_circle(const Params& params, double tau, int n_samples) {
  if (params.alpha() != 1.0) throw ClosedFormUnavailable();
  if (!(tau >= 0.0)) throw DomainError("tau must be non-negative");
  if (n_samples < 2) throw DomainError("need at least two samples per branch");
  const double l = params.l();
  const double phi = std::atan(tau);
  struct Branch {
    double lo, hi;
    bool lo_closed, hi_closed;
  };
  const Branch branches[6] = {
      {0.0, 0.5 * kPi, false, true},          {0.5 * kPi, kPi - phi, false, false},
      {kPi - phi, kPi, true, false},          {kPi, 1.5 * kPi, false, true},
      {1.5 * kPi, kTwoPi - phi, false, false}, {kTwoPi - phi, kTwoPi, true, false},
  };
  Isochrone iso;
  iso.tau = tau;
  for (int bi = 0; bi < 6; ++bi) {
    const Branch& br = branches[bi];
    if (!(br.hi > br.lo)) continue;
    for (int k = 0; k < n_samples; ++k) {
      if ((k == 0 && !br.lo_closed) || (k == n_samples - 1 && !br.hi_closed)) continue;
      const double th = br.lo + (br.hi - br.lo) * k / (n_samples - 1);
      const double c = std::cos(th), s = std::sin(th), t = std::tan(th);
      const double base = l * (c - tau * s);
      State x;
      switch (bi) {
        case 0:
        case 1: x = {base - 0.5 * tau * tau, l * s + tau}; break;
        case 2: x = {base + 0.5 * tau * tau + t * t + 2.0 * tau * t, l * s - 2.0 * t - tau}; break;
        case 3:
        case 4: x = {base + 0.5 * tau * tau, l * s - tau}; break;
        default: x = {base - 0.5 * tau * tau - t * t - 2.0 * tau * t, l * s + 2.0 * t + tau}; break;
      }
      iso.points.push_back({th, x, "b" + std::to_string(bi + 1), CircleTheta{th}});
    }
  }
  return iso;
}

/// Level set by retrograde integration from the given anchors. Samples whose
/// value differs from tau by more than `tolerance` (overtaken by a faster
/// family) are dropped.
inline Isochrone isochrone_from_anchors(const Manifold& m, const Params& params,
                                        const std::vector<BoundaryPoint>& anchors, double tau,
                                        double step = 1e-3, double tolerance = 1e-6) {
  if (!(tau >= 0.0)) throw DomainError("tau must be non-negative");
  Isochrone iso;
  iso.tau = tau;
  for (const BoundaryPoint& b : anchors) {
    const State x = numeric_retro(m, b, params, tau, step).first;
    if (in_interior(m, x)) continue;
    const auto r = detail::synthesize(m, params, x);
    if (!r || std::abs(r->time_to_go - tau) > tolerance) continue;
    std::string fam = boundary_kind(b);
    if (const auto ts = switch_tau(b); ts && tau > *ts) fam += "_post";
    iso.points.push_back({boundary_param(b), x, fam, b});
  }
  return iso;
}

inline Isochrone isochrone_generic(const Manifold& m, const Params& params, double tau, int n_samples,
                                   double step = 1e-3) {
  if (n_samples < 2) throw DomainError("need at least two samples per interval");
  return isochrone_from_anchors(m, params, sample_up(m, params, n_samples), tau, step);
}

}  // namespace mintime

#endif  // MINTIME_ISOCHRONE_HPP
