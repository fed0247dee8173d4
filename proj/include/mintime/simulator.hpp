#ifndef MINTIME_SIMULATOR_HPP
#define MINTIME_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "mintime/synthesis.hpp"

namespace mintime {

enum class Termination { ReachedUP, MaxTimeExceeded };

inline const char* to_string(Termination t) {
  return t == Termination::ReachedUP ? "reached_up" : "max_time_exceeded";
}

/// u is the control held from t until the next sample.
struct TrajectorySample {
  double t = 0.0;
  State x;
  double u = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination termination = Termination::MaxTimeExceeded;
  std::optional<BoundaryPoint> terminal;
  double t_final = 0.0;
  double dt = 0.0;

  int control_switches() const {
    int n = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].u != samples[i - 1].u) ++n;
    }
    return n;
  }
};

using Policy = std::function<double(State)>;

/// One classical Runge-Kutta step with the control held constant.
inline State rk4_step(State x, double u, double h, const Params& params) {
  const State k1 = dynamics(x, u, params);
  const State k2 = dynamics(x + (0.5 * h) * k1, u, params);
  const State k3 = dynamics(x + (0.5 * h) * k2, u, params);
  const State k4 = dynamics(x + h * k3, u, params);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

// Smallest tau in (0, h] at which the step from x meets the target, located
// by bisection on the signed distance.
inline std::optional<double> target_crossing(const Manifold& m, const Params& params, State x, double u,
                                             double h) {
  constexpr int kSub = 4;
  double lo = 0.0;
  for (int k = 1; k <= kSub; ++k) {
    const double hi = h * k / kSub;
    if (signed_distance(m, rk4_step(x, u, hi, params)) > 0.0) {
      lo = hi;
      continue;
    }
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      if (std::abs(signed_distance(m, rk4_step(x, u, b, params))) <= 1e-10) break;
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (signed_distance(m, rk4_step(x, u, mid, params)) > 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return b;
  }
  return std::nullopt;
}

// Time until x2 reaches the switch level under control u, if within h.
inline std::optional<double> switch_crossing(State x, State sw, double u, double h, const Params& params) {
  const auto g = [&](double tau) { return u * (sw.x2 - rk4_step(x, u, tau, params).x2); };
  if (g(0.0) <= 0.0 || g(h) > 0.0) return std::nullopt;
  double a = 0.0, b = h;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (g(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return b;
}

template <class Control>
Trajectory rollout(const Manifold& m, const Params& params, State s0, double dt, double t_max,
                   Control&& control) {
  if (!(dt > 0.0) || !(t_max > 0.0)) throw DomainError("dt and t_max must be positive");
  if (in_interior(m, s0)) throw AlreadyTerminated();
  Trajectory tr;
  tr.dt = dt;
  double t = 0.0;
  State x = s0;
  for (;;) {
    // control() returns {u, step length, reached}
    const auto [u, h_max, done, term] = control(x);
    if (done) {
      tr.samples.push_back({t, x, u});
      tr.termination = Termination::ReachedUP;
      tr.terminal = term;
      tr.t_final = t;
      return tr;
    }
    const double h = std::min(h_max, t_max - t);
    if (h <= 0.0) {
      tr.samples.push_back({t, x, u});
      tr.t_final = t;
      return tr;
    }
    tr.samples.push_back({t, x, u});
    if (const auto hit = target_crossing(m, params, x, u, h)) {
      const State xe = rk4_step(x, u, *hit, params);
      t += *hit;
      tr.samples.push_back({t, xe, u});
      tr.termination = Termination::ReachedUP;
      tr.terminal = project_to_boundary(m, xe);
      tr.t_final = t;
      return tr;
    }
    x = rk4_step(x, u, h, params);
    t += h;
  }
}

struct Step {
  double u;
  double h;
  bool done;
  std::optional<BoundaryPoint> terminal;
};

}  // namespace detail

/// Closed loop under the synthesized feedback, re-evaluated every step.
/// Steps are cut at switching-curve and target crossings.
inline Trajectory simulate(const Manifold& m, const Params& params, State s0, double dt, double t_max) {
  const FeedbackOptions fast{false};
  return detail::rollout(m, params, s0, dt, t_max, [&](State x) {
    const SynthesisResult r = feedback(m, params, x, fast);
    if (r.time_to_go == 0.0) return detail::Step{r.u, 0.0, true, r.terminal_point};
    double h = dt;
    double u = r.u;
    if (r.switch_state && norm(*r.switch_state - x) > 1e-9 * (1.0 + norm(x))) {
      if (const auto ts = detail::switch_crossing(x, *r.switch_state, u, dt, params)) {
        if (*ts <= 1e-12) {
          u = -u;
        } else {
          h = *ts;
        }
      }
    }
    return detail::Step{u, h, false, std::nullopt};
  });
}

/// Rollout under an arbitrary state feedback, for comparisons.
inline Trajectory simulate_policy(const Manifold& m, const Params& params, State s0, double dt, double t_max,
                                  const Policy& policy) {
  return detail::rollout(m, params, s0, dt, t_max, [&](State x) {
    const double u = policy(x);
    check_control(u);
    return detail::Step{u, dt, false, std::nullopt};
  });
}

struct RolloutReport {
  double max_deviation = 0.0;
  double threshold = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  bool terminated = false;
  bool violation = false;
};

/// Audits a rollout against the value function: along an optimal closed
/// loop value(x(t)) = t_f - t. Samples flagged near a jump locus, or for
/// which `skip` is true, are left out. A rollout that never reached the
/// target is measured against value(x(t)) = value(x0) - t instead and is
/// always flagged.
inline RolloutReport verify_rollout(const Trajectory& traj, const Manifold& m, const Params& params,
                                    const std::function<bool(State)>& skip = {}) {
  RolloutReport rep;
  rep.threshold = 5.0 * traj.dt;
  rep.terminated = traj.termination == Termination::ReachedUP;
  if (traj.samples.empty()) return rep;
  std::optional<double> v0;
  for (const auto& smp : traj.samples) {
    if (in_interior(m, smp.x) || (skip && skip(smp.x))) {
      ++rep.skipped;
      continue;
    }
    const SynthesisResult r = feedback(m, params, smp.x);
    if (r.discontinuity_flag) {
      ++rep.skipped;
      continue;
    }
    double expected;
    if (rep.terminated) {
      expected = traj.t_final - smp.t;
    } else {
      if (!v0) v0 = r.time_to_go + smp.t;
      expected = *v0 - smp.t;
    }
    rep.max_deviation = std::max(rep.max_deviation, std::abs(r.time_to_go - expected));
    ++rep.checked;
  }
  rep.violation = !rep.terminated || rep.max_deviation > rep.threshold;
  return rep;
}

}  // namespace mintime

#endif  // MINTIME_SIMULATOR_HPP
