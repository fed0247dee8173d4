#ifndef MINTIME_ORACLE_HPP
#define MINTIME_ORACLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "mintime/manifold.hpp"
#include "mintime/model.hpp"

// Brute-force minimum time over bang-bang policies with at most one switch.
// Uses nothing but the dynamics and target membership.

namespace mintime {

class HorizonExceeded : public DomainError {
 public:
  HorizonExceeded() : DomainError("horizon exceeded: no candidate policy reaches the target") {}
};

struct PolicyCandidate {
  double u0 = 1.0;
  double t_switch = 0.0;
  double t_final = 0.0;
};

struct OracleOptions {
  double t_step = 1e-2;
  double horizon = 20.0;
  double refine_tol = 1e-4;
  /// Also search three-arc policies (u0, -u0, u0) for anything faster.
  bool two_switch_probe = false;
  double probe_step = 5e-2;
};

struct OracleSolution {
  double time = 0.0;
  PolicyCandidate policy;
  /// Best three-arc time when the probe found one faster than `time`.
  std::optional<double> two_switch_time;
};

namespace detail {

// A start on the boundary counts as arrived only if some admissible normal
// there allows penetration.
inline bool start_accepted(const Manifold& m, const Params& params, State s) {
  if (!contains(m, s)) return false;
  if (in_interior(m, s)) return true;
  const auto ok = [&](double n1, double n2) {
    return n1 * s.x2 - params.alpha() * std::abs(n2) <= kBupTolerance;
  };
  if (m.is_circle()) {
    const double r = norm(s);
    return ok(s.x1 / r, s.x2 / r);
  }
  const bool on_x1 = std::abs(s.x1) >= 1.0;
  const bool on_x2 = std::abs(s.x2) >= 1.0;
  if (on_x1 && on_x2) {
    const double a0 = std::atan2(0.0, sign(s.x1));
    double a1 = std::atan2(sign(s.x2), 0.0);
    if (a1 - a0 > kPi) a1 -= kTwoPi;
    if (a0 - a1 > kPi) a1 += kTwoPi;
    for (int k = 0; k <= 90; ++k) {
      const double a = a0 + (a1 - a0) * k / 90.0;
      if (ok(std::cos(a), std::sin(a))) return true;
    }
    return false;
  }
  if (on_x1) return ok(sign(s.x1), 0.0);
  return ok(0.0, sign(s.x2));
}

struct OneSwitchSearch {
  const Manifold& m;
  const Params& params;
  State s0;
  double reach;  // |x2| bound of the target
  bool start_ok;

  bool arrived(State x, double tf) const { return contains(m, x) && (tf > 0.0 || start_ok); }

  // Entry time of the policy (u0 until ts, then -u0), if below t_hi: first
  // grid time t_lo + k h inside the target, refined within that step.
  std::optional<double> first_entry(double u0, double ts, double t_lo, double t_hi, double h) const {
    const State sw = propagate(s0, u0, ts, params);
    const double a = -u0 * params.alpha();
    // |x2| <= reach is necessary; x2 is linear on the second arc
    double lo = std::max(t_lo, ts), hi = t_hi + h;
    const double e1 = ts + (-reach - sw.x2) / a;
    const double e2 = ts + (reach - sw.x2) / a;
    lo = std::max(lo, std::min(e1, e2) - h);
    hi = std::min(hi, std::max(e1, e2) + h);
    if (lo >= hi) return std::nullopt;
    const double k0 = std::max(0.0, std::ceil((lo - t_lo) / h - 1e-9));
    for (double k = k0;; k += 1.0) {
      const double tf = t_lo + k * h;
      if (tf >= hi) break;
      if (!arrived(propagate(sw, -u0, tf - ts, params), tf)) continue;
      // entry lies in the last step; shrink it
      double a = std::max(ts, tf - h), b = tf;
      if (a >= b || arrived(propagate(sw, -u0, a - ts, params), a)) {
        return tf < t_hi ? std::optional<double>(tf) : std::nullopt;
      }
      for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        if (arrived(propagate(sw, -u0, mid - ts, params), mid)) {
          b = mid;
        } else {
          a = mid;
        }
      }
      return b < t_hi ? std::optional<double>(b) : std::nullopt;
    }
    return std::nullopt;
  }
};

}  // namespace detail

inline OracleSolution oracle_solve(const Manifold& m, const Params& params, State s0,
                                   const OracleOptions& opts = {}) {
  if (in_interior(m, s0)) throw DomainError("already terminated: state is inside the target");
  if (opts.t_step <= 0.0 || opts.horizon <= 0.0 || opts.refine_tol <= 0.0) {
    throw DomainError("oracle grid parameters must be positive");
  }
  const double reach = m.is_circle() ? m.radius() : 1.0;
  const detail::OneSwitchSearch search{m, params, s0, reach, detail::start_accepted(m, params, s0)};
  if (search.start_ok) return {0.0, {1.0, 0.0, 0.0}, std::nullopt};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::array<PolicyCandidate, 2> best{PolicyCandidate{1.0, 0.0, kInf}, PolicyCandidate{-1.0, 0.0, kInf}};
  const auto overall = [&] { return std::min(best[0].t_final, best[1].t_final); };

  // coarse sweep over the whole horizon
  const double h = opts.t_step;
  const long n = static_cast<long>(std::floor(opts.horizon / h + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double ts = i * h;
    if (ts >= overall()) break;
    for (auto& b : best) {
      const double cap = std::min(overall(), opts.horizon);
      if (auto tf = search.first_entry(b.u0, ts, 0.0, cap, h)) {
        if (*tf < b.t_final) b = {b.u0, ts, *tf};
      }
    }
  }
  if (!std::isfinite(overall())) throw HorizonExceeded();

  // shrink the window around each family's best until the step is fine enough
  double hp = h;
  while (hp > opts.refine_tol * (1.0 + 1e-9)) {
    const double hn = hp / 10.0;
    for (auto& b : best) {
      if (!std::isfinite(b.t_final)) continue;
      const PolicyCandidate c = b;
      const double ts_lo = std::max(0.0, c.t_switch - 2.0 * hp);
      const double tf_lo = std::max(0.0, c.t_final - 2.0 * hp);
      for (int k = 0; k <= 40; ++k) {
        const double ts = ts_lo + k * hn;
        if (ts > c.t_switch + 2.0 * hp || ts > b.t_final) break;
        const double lo = std::max(tf_lo, ts);
        if (auto tf = search.first_entry(b.u0, ts, lo, b.t_final, hn)) {
          if (*tf < b.t_final) b = {b.u0, ts, *tf};
        }
      }
    }
    hp = hn;
  }

  const PolicyCandidate win = best[0].t_final <= best[1].t_final ? best[0] : best[1];
  OracleSolution out{win.t_final, win, std::nullopt};
  if (opts.two_switch_probe) {
    // three arcs: u0 until t1, -u0 until t2, u0 until tf; only improvements count
    const auto reached3 = [&](double u0, double t1, double t2, double tf) {
      State x = propagate(s0, u0, t1, params);
      x = propagate(x, -u0, t2 - t1, params);
      x = propagate(x, u0, tf - t2, params);
      return contains(m, x);
    };
    double t_best = out.time - opts.refine_tol;
    std::optional<std::array<double, 4>> arg;
    const auto scan = [&](double u0, double t1_lo, double t1_hi, double t2_lo, double t2_hi, double step) {
      for (double t1 = t1_lo; t1 <= t1_hi && t1 < t_best; t1 += step) {
        for (double t2 = std::max(t1, t2_lo); t2 <= t2_hi && t2 < t_best; t2 += step) {
          for (double tf = t2; tf < t_best; tf += step) {
            if (reached3(u0, t1, t2, tf)) {
              t_best = tf;
              arg = std::array<double, 4>{u0, t1, t2, tf};
              break;
            }
          }
        }
      }
    };
    for (double u0 : {1.0, -1.0}) scan(u0, 0.0, t_best, 0.0, t_best, opts.probe_step);
    double hp3 = opts.probe_step;
    while (arg && hp3 > opts.refine_tol * (1.0 + 1e-9)) {
      const auto c = *arg;
      const double hn = hp3 / 10.0;
      scan(c[0], std::max(0.0, c[1] - 2.0 * hp3), c[1] + 2.0 * hp3, std::max(0.0, c[2] - 2.0 * hp3),
           c[2] + 2.0 * hp3, hn);
      hp3 = hn;
    }
    if (arg) out.two_switch_time = (*arg)[3];
  }
  return out;
}

/// Minimum time to the closed target over one-switch bang-bang policies.
inline double oracle_min_time(const Manifold& m, const Params& params, State s0,
                              const OracleOptions& opts = {}) {
  return oracle_solve(m, params, s0, opts).time;
}

struct OracleRow {
  State state;
  double oracle = std::numeric_limits<double>::quiet_NaN();
  double synthesis = std::numeric_limits<double>::quiet_NaN();
  double abs_error = std::numeric_limits<double>::quiet_NaN();
  bool inside = false;
  bool excluded = false;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_error = 0.0;
  double mean_error = 0.0;
  std::size_t compared = 0;
  std::size_t excluded = 0;
};

/// Evenly spaced n x n grid on [-half_width, half_width]^2, row-major in x2 then x1.
inline std::vector<State> symmetric_grid(int n, double half_width) {
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  const int mid = (n - 1) / 2;
  const double h = n > 1 ? 2.0 * half_width / (n - 1) : 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      // index from the center so that the grid is exactly symmetric
      out.push_back({(i - mid) * h, (j - mid) * h});
    }
  }
  return out;
}

/// Oracle against a caller-supplied synthesis value at each state. States
/// for which `exclude` returns true are reported but left out of the summary.
inline OracleReport oracle_grid_report(const Manifold& m, const Params& params,
                                       const std::vector<State>& states,
                                       const std::function<double(State)>& synthesis_value,
                                       const std::function<bool(State)>& exclude = {},
                                       const OracleOptions& opts = {}) {
  OracleReport rep;
  double sum = 0.0;
  for (const State& s : states) {
    OracleRow row;
    row.state = s;
    if (in_interior(m, s)) {
      row.inside = true;
      rep.rows.push_back(row);
      continue;
    }
    row.oracle = oracle_min_time(m, params, s, opts);
    row.synthesis = synthesis_value(s);
    row.abs_error = std::abs(row.oracle - row.synthesis);
    row.excluded = exclude && exclude(s);
    if (row.excluded) {
      ++rep.excluded;
    } else {
      ++rep.compared;
      rep.max_error = std::max(rep.max_error, row.abs_error);
      sum += row.abs_error;
    }
    rep.rows.push_back(row);
  }
  rep.mean_error = rep.compared ? sum / rep.compared : 0.0;
  return rep;
}

}  // namespace mintime

#endif  // MINTIME_ORACLE_HPP
