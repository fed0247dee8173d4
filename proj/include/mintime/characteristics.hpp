#ifndef MINTIME_CHARACTERISTICS_HPP
#define MINTIME_CHARACTERISTICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mintime/manifold.hpp"
#include "mintime/model.hpp"

namespace mintime {

/// Adjoint (lambda1, lambda2) = gradient of the time-to-go.
struct Costate {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// lambda2 == 0: the sign rule does not pick a control at this instant.
class SingularInstant : public DomainError {
 public:
  SingularInstant() : DomainError("singular instant: lambda2 == 0") {}
};

/// Requested a closed form outside alpha == 1.
class ClosedFormUnavailable : public DomainError {
 public:
  ClosedFormUnavailable() : DomainError("closed form unavailable for alpha != 1, use numeric_retro") {}
};

inline double hamiltonian(State s, Costate c, double u, const Params& params) {
  check_control(u);
  return 1.0 + c.lambda1 * s.x2 + c.lambda2 * params.alpha() * u;
}

/// H at the minimizing control, 1 + lambda1 x2 - alpha |lambda2|.
inline double optimal_hamiltonian(State s, Costate c, const Params& params) {
  return 1.0 + c.lambda1 * s.x2 - params.alpha() * std::abs(c.lambda2);
}

inline double optimal_control(Costate c) {
  if (c.lambda2 == 0.0) throw SingularInstant();
  return c.lambda2 > 0.0 ? -1.0 : 1.0;
}

namespace detail {

inline void require_anchoring(const Manifold& m, const BoundaryPoint& b, const Params& params) {
  if (std::holds_alternative<SquareCorner>(b)) {
    check_kind(m, b);
    return;
  }
  if (classify(m, b, params) != RegionClass::UP || !in_up_intervals(m, b, params)) {
    throw DomainError("no terminating characteristic: boundary point is not in the usable part");
  }
}

}  // namespace detail

/// Terminal costate a n from H* = 0 at the final time; a > 0 on the UP.
inline Costate terminal_costate(const Manifold& m, const BoundaryPoint& b, const Params& params) {
  detail::require_anchoring(m, b, params);
  const double alpha = params.alpha();
  Costate c;
  if (const auto* ct = std::get_if<CircleTheta>(&b)) {
    const double s = std::sin(ct->theta), co = std::cos(ct->theta);
    const double a = 1.0 / (alpha * std::abs(s) - m.radius() * s * co);
    c = {a * co, a * s};
  } else if (const auto* sd = std::get_if<SquareSide>(&b)) {
    switch (sd->side) {
      case Side::AB: c = {-1.0 / sd->s, 0.0}; break;
      case Side::BC: c = {0.0, -1.0 / alpha}; break;
      case Side::CD: c = {-1.0 / sd->s, 0.0}; break;
      case Side::AD: c = {0.0, 1.0 / alpha}; break;
    }
  } else {
    const auto& cr = std::get<SquareCorner>(b);
    const double s = std::sin(cr.theta), co = std::cos(cr.theta);
    const double a = cr.corner == Corner::A ? 1.0 / (alpha * s - co) : 1.0 / (co - alpha * s);
    c = {a * co, a * s};
  }
  if (!std::isfinite(c.lambda1) || !std::isfinite(c.lambda2)) {
    throw DomainError("no terminating characteristic: degenerate terminal costate");
  }
  return c;
}

/// Retrograde time at which lambda2 changes sign, if it does.
inline std::optional<double> switch_tau(const BoundaryPoint& b) {
  if (const auto* ct = std::get_if<CircleTheta>(&b)) {
    const double t = ct->theta;
    if ((t > 0.5 * kPi && t < kPi) || (t > 1.5 * kPi && t < kTwoPi)) return -std::tan(t);
    return std::nullopt;
  }
  if (std::holds_alternative<SquareSide>(b)) return std::nullopt;
  const auto& cr = std::get<SquareCorner>(b);
  if (cr.theta == corner_cone_lo(cr.corner)) return std::nullopt;
  return std::max(0.0, -std::tan(cr.theta));
}

inline Costate costate_retro(const Manifold& m, const BoundaryPoint& b, const Params& params,
                             double tau) {
  if (!(tau >= 0.0)) throw DomainError("retrograde time must be non-negative");
  const Costate c0 = terminal_costate(m, b, params);
  return {c0.lambda1, c0.lambda2 + c0.lambda1 * tau};
}

/// One constant-control piece of a characteristic. `control` is the forward
/// time control; in retrograde time x2 moves at -alpha * control.
struct CharacteristicArc {
  BoundaryPoint origin;
  double control = 0.0;
  double tau_start = 0.0;
  double tau_end = std::numeric_limits<double>::infinity();
  State start_state;

  State at(double tau, const Params& params) const {
    const double d = tau - tau_start;
    const double a = params.alpha() * control;
    return {start_state.x1 - start_state.x2 * d + 0.5 * a * d * d, start_state.x2 - a * d};
  }
};

struct Characteristic {
  std::vector<CharacteristicArc> arcs;
  std::optional<double> switch_tau;

  const CharacteristicArc& arc_at(double tau) const {
    for (const auto& a : arcs) {
      if (tau < a.tau_end) return a;
    }
    return arcs.back();
  }
  State state_at(double tau, const Params& params) const { return arc_at(tau).at(tau, params); }
  double control_at(double tau) const { return arc_at(tau).control; }
};

/// Builds the one- or two-arc characteristic from the sign pattern of
/// lambda2(tau), which is proportional to n2 + tau n1. Works at closure
/// points of the UP too, where the scale a is unbounded but the arcs are not.
inline Characteristic characteristic(const Manifold& m, const BoundaryPoint& b,
                                     const Params& params) {
  const State x0 = boundary_state(m, b);
  const Normal n = outward_normal(m, b);
  // interior sign of lambda2 just after tau = 0
  const double s0 = n.n2 != 0.0 ? sign(n.n2) : sign(n.n1);
  const double u_final = s0 > 0.0 ? -1.0 : 1.0;
  Characteristic ch;
  std::optional<double> ts;
  if (n.n1 != 0.0 && n.n2 != 0.0 && -n.n2 / n.n1 > 0.0) ts = -n.n2 / n.n1;
  CharacteristicArc first{b, u_final, 0.0, std::numeric_limits<double>::infinity(), x0};
  if (ts && std::isfinite(*ts)) {
    first.tau_end = *ts;
    ch.arcs.push_back(first);
    ch.arcs.push_back(CharacteristicArc{b, -u_final, *ts, std::numeric_limits<double>::infinity(),
                                        first.at(*ts, params)});
    ch.switch_tau = ts;
  } else {
    ch.arcs.push_back(first);
  }
  return ch;
}

/// Closed-form retrograde trajectories for alpha = 1, written out per case
/// (circle quadrants, square sides and corners).
inline State closed_form_state(const Manifold& m, const BoundaryPoint& b, const Params& params,
                               double tau) {
  if (params.alpha() != 1.0) throw ClosedFormUnavailable();
  if (!(tau >= 0.0)) throw DomainError("retrograde time must be non-negative");
  detail::require_anchoring(m, b, params);
  if (const auto* ct = std::get_if<CircleTheta>(&b)) {
    const double l = m.radius();
    const double th = ct->theta;
    const double c = std::cos(th), s = std::sin(th), t = std::tan(th);
    if (th > 0.0 && th <= 0.5 * kPi) {
      return {l * c - l * tau * s - 0.5 * tau * tau, l * s + tau};
    }
    if (th > 0.5 * kPi && th < kPi) {
      if (tau < -t) return {l * (c - tau * s) - 0.5 * tau * tau, l * s + tau};
      return {l * (c - tau * s) + t * t + 0.5 * tau * tau + 2.0 * tau * t, l * s - 2.0 * t - tau};
    }
    if (th > kPi && th <= 1.5 * kPi) {
      return {l * c - tau * l * s + 0.5 * tau * tau, l * s - tau};
    }
    if (tau < -t) return {l * (c - tau * s) + 0.5 * tau * tau, l * s - tau};
    return {l * c - t * t - 0.5 * tau * tau - (l * s + 2.0 * t) * tau, l * s + 2.0 * t + tau};
  }
  if (const auto* sd = std::get_if<SquareSide>(&b)) {
    const double p = sd->s;
    switch (sd->side) {
      case Side::AB: return {-1.0 - p * tau + 0.5 * tau * tau, p - tau};
      case Side::BC: return {p + tau + 0.5 * tau * tau, -1.0 - tau};
      case Side::CD: return {1.0 - p * tau - 0.5 * tau * tau, p + tau};
      case Side::AD: return {p - tau - 0.5 * tau * tau, 1.0 + tau};
    }
  }
  const auto& cr = std::get<SquareCorner>(b);
  const auto ts = switch_tau(cr);
  const double t = std::tan(cr.theta);
  if (cr.corner == Corner::A) {
    if (!ts || tau <= *ts) return {-1.0 - tau - 0.5 * tau * tau, 1.0 + tau};
    return {-1.0 - tau + 2.0 * tau * t + 0.5 * tau * tau + t * t, 1.0 - 2.0 * t - tau};
  }
  if (!ts || tau <= *ts) return {1.0 + tau + 0.5 * tau * tau, -1.0 - tau};
  return {1.0 + tau - 2.0 * tau * t - 0.5 * tau * tau - t * t, -1.0 + 2.0 * t + tau};
}

/// Fixed-step RK4 integration of the retrograde state/costate system
///   x1' = -x2, x2' = alpha sign(lambda2), lambda1' = 0, lambda2' = lambda1,
/// in one pass over the sorted times `taus`. Steps are split exactly at the
/// switch time and at every requested time.
inline std::vector<std::pair<State, Costate>> numeric_retro_samples(const Manifold& m, const BoundaryPoint& b,
                                                                    const Params& params,
                                                                    const std::vector<double>& taus,
                                                                    double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  if (!std::is_sorted(taus.begin(), taus.end())) throw DomainError("retrograde times must be sorted");
  if (!taus.empty() && !(taus.front() >= 0.0)) throw DomainError("retrograde time must be non-negative");
  State x = boundary_state(m, b);
  Costate c = terminal_costate(m, b, params);
  const std::optional<double> ts = switch_tau(b);
  const double alpha = params.alpha();
  using Vec = std::array<double, 4>;

  const auto advance = [&](double len) {
    if (!(len > 0.0)) return;
    const auto n = static_cast<long>(std::ceil(len / step));
    const double h = len / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      // the sign is constant on the step; read it in the interior
      const double sg = sign(c.lambda2 + 0.5 * h * c.lambda1);
      const auto rhs = [&](const Vec& y) -> Vec { return {-y[1], alpha * sg, 0.0, y[2]}; };
      const Vec y{x.x1, x.x2, c.lambda1, c.lambda2};
      const Vec k1 = rhs(y);
      Vec tmp;
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      const Vec k2 = rhs(tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      const Vec k3 = rhs(tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * k3[i];
      const Vec k4 = rhs(tmp);
      Vec out;
      for (int i = 0; i < 4; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      x = {out[0], out[1]};
      c = {out[2], out[3]};
    }
  };

  std::vector<std::pair<State, Costate>> out;
  out.reserve(taus.size());
  double now = 0.0;
  for (double tau : taus) {
    if (ts && *ts > now && *ts < tau) {
      advance(*ts - now);
      now = *ts;
    }
    advance(tau - now);
    now = std::max(now, tau);
    out.emplace_back(x, c);
  }
  return out;
}

inline std::pair<State, Costate> numeric_retro(const Manifold& m, const BoundaryPoint& b,
                                               const Params& params, double tau, double step) {
  if (!(tau >= 0.0)) throw DomainError("retrograde time must be non-negative");
  return numeric_retro_samples(m, b, params, {tau}, step).front();
}

/// One sample of the optimal flow field: state and costate at retrograde
/// time tau along the characteristic from `anchor`.
struct FlowSample {
  BoundaryPoint anchor;
  double tau = 0.0;
  State x;
  Costate costate;
  double u = 0.0;
};

inline std::vector<FlowSample> flow_field(const Manifold& m, const Params& params,
                                          const std::vector<BoundaryPoint>& anchors,
                                          const std::vector<double>& taus) {
  std::vector<FlowSample> out;
  out.reserve(anchors.size() * taus.size());
  for (const BoundaryPoint& b : anchors) {
    const Characteristic ch = characteristic(m, b, params);
    for (double tau : taus) {
      out.push_back({b, tau, ch.state_at(tau, params), costate_retro(m, b, params, tau), ch.control_at(tau)});
    }
  }
  return out;
}

}  // namespace mintime

#endif  // MINTIME_CHARACTERISTICS_HPP
