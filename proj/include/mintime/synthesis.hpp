#ifndef MINTIME_SYNTHESIS_HPP
#define MINTIME_SYNTHESIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mintime/characteristics.hpp"
#include "mintime/manifold.hpp"
#include "mintime/model.hpp"

namespace mintime {

/// Query state lies strictly inside the target: nothing left to do.
class AlreadyTerminated : public DomainError {
 public:
  AlreadyTerminated() : DomainError("already terminated: state is inside the target") {}
};

/// Trajectory families that end on the usable part. Each "upper" family has
/// a centrally reflected "lower" twin. Pre = arc ending on the target with no
/// switch left; Post = arc that still has to cross a switching curve.
enum class Family {
  CirclePreUpper,   // u = -1 into theta in (0, pi)
  CirclePostUpper,  // u = +1, then switch onto the pre arc of theta in (pi/2, pi)
  SquareAD,         // u = -1 into AD
  SquareAB,         // u = +1 into AB
  SquarePreA,       // u = -1 into vertex A
  SquarePostA,      // u = +1, switch on the A curve, then ride it into A
  CirclePreLower,
  CirclePostLower,
  SquareBC,
  SquareCD,
  SquarePreC,
  SquarePostC,
};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::CirclePreUpper: return "circle_pre_upper";
    case Family::CirclePostUpper: return "circle_post_upper";
    case Family::SquareAD: return "square_AD";
    case Family::SquareAB: return "square_AB";
    case Family::SquarePreA: return "square_pre_A";
    case Family::SquarePostA: return "square_post_A";
    case Family::CirclePreLower: return "circle_pre_lower";
    case Family::CirclePostLower: return "circle_post_lower";
    case Family::SquareBC: return "square_BC";
    case Family::SquareCD: return "square_CD";
    case Family::SquarePreC: return "square_pre_C";
    case Family::SquarePostC: return "square_post_C";
  }
  return "?";
}

inline Family reflected(Family f) {
  const int n = 6;
  const int i = static_cast<int>(f);
  return static_cast<Family>(i < n ? i + n : i - n);
}

/// Outcome of the feedback query at one state.
struct SynthesisResult {
  double u = 0.0;
  double time_to_go = 0.0;
  BoundaryPoint terminal_point;
  std::optional<State> switch_state;
  bool discontinuity_flag = false;
  Family family = Family::CirclePreUpper;
};

namespace detail {

inline constexpr double kTauTol = 1e-9;
inline constexpr double kParamTol = 1e-12;

struct Candidate {
  Family family;
  BoundaryPoint terminal;
  double tau;
  double u;
  std::optional<State> switch_state;
};

inline Candidate reflect(const Candidate& c) {
  Candidate r{reflected(c.family), mintime::reflect(c.terminal), c.tau, -c.u, std::nullopt};
  if (c.switch_state) r.switch_state = -*c.switch_state;
  return r;
}

// u = -1 arcs ending on the upper half of the circle, anchors phi in
// [phi_lo, pi]. The arc keeps x1 + x2^2 / (2 alpha) constant; solving for
// cos(phi) is a quadratic.
inline void circle_pre_upper(double l, double alpha, double phi_lo, State s,
                             std::vector<Candidate>& out) {
  const double k = s.x1 + s.x2 * s.x2 / (2.0 * alpha);
  double d = 1.0 - 2.0 * k / alpha + (l * l) / (alpha * alpha);
  if (d < -1e-12) return;
  d = std::max(d, 0.0);
  const double sd = std::sqrt(d);
  const std::array<double, 2> roots{(2.0 * k - l * l / alpha) / (l * (1.0 + sd)),
                                    (alpha / l) * (1.0 + sd)};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == 1 && sd == 0.0) break;
    double c = roots[i];
    if (c > 1.0 + kParamTol || c < -1.0 - kParamTol) continue;
    c = std::clamp(c, -1.0, 1.0);
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = std::atan2(sn, c);
    if (phi < phi_lo - kParamTol) continue;
    double tau = (s.x2 - l * sn) / alpha;
    if (tau < -kTauTol) continue;
    tau = std::max(tau, 0.0);
    if (c < 0.0) {
      const double ts = -sn / c;
      if (tau > ts + kTauTol * (1.0 + ts)) continue;
    }
    out.push_back({Family::CirclePreUpper, CircleTheta{std::max(phi, phi_lo)}, tau, -1.0, std::nullopt});
  }
}

// Switch state of the anchor theta = pi - psi, psi in [0, pi/2).
inline State circle_switch_state(double l, double alpha, double psi) {
  const double ts = std::tan(psi);
  return {-l / std::cos(psi) - 0.5 * alpha * ts * ts, l * std::sin(psi) + alpha * ts};
}

// x1 - x2^2/(2 alpha) at the switch state; strictly decreasing in psi.
inline double circle_post_constant(double l, double alpha, double psi) {
  const State sw = circle_switch_state(l, alpha, psi);
  return sw.x1 - sw.x2 * sw.x2 / (2.0 * alpha);
}

// u = +1 arcs that meet the upper switching curve and continue on the pre
// arc of theta in (pi/2, pi]. Bisection on psi = pi - theta.
inline void circle_post_upper(double l, double alpha, State s, std::vector<Candidate>& out) {
  const double k = s.x1 - s.x2 * s.x2 / (2.0 * alpha);
  if (k > -l) return;
  double lo = 0.0;
  double hi = 0.25 * kPi;
  int guard = 0;
  while (circle_post_constant(l, alpha, hi) > k) {
    lo = hi;
    hi = 0.5 * (hi + 0.5 * kPi);
    if (++guard > 200 || hi >= 0.5 * kPi) return;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (circle_post_constant(l, alpha, mid) > k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double psi = 0.5 * (lo + hi);
  const State sw = circle_switch_state(l, alpha, psi);
  if (s.x2 > sw.x2 + kTauTol) return;
  const double ts = std::tan(psi);
  const double tau = ts + std::max(0.0, sw.x2 - s.x2) / alpha;
  out.push_back({Family::CirclePostUpper, CircleTheta{kPi - psi}, tau, 1.0, sw});
}

inline void square_upper(double alpha, State s, std::vector<Candidate>& out) {
  const double ia = 1.0 / (2.0 * alpha);
  const double k_minus = s.x1 + s.x2 * s.x2 * ia;  // u = -1 arcs
  const double k_plus = s.x1 - s.x2 * s.x2 * ia;   // u = +1 arcs
  // AD: (s2 - tau - alpha tau^2/2, 1 + alpha tau)
  {
    const double s2 = k_minus - ia;
    const double tau = (s.x2 - 1.0) / alpha;
    if (s2 >= -1.0 - kParamTol && s2 <= 1.0 + kParamTol && tau >= -kTauTol) {
      out.push_back({Family::SquareAD, SquareSide{Side::AD, std::clamp(s2, -1.0, 1.0)},
                     std::max(tau, 0.0), -1.0, std::nullopt});
    }
  }
  // AB: (-1 - s3 tau + alpha tau^2/2, s3 - alpha tau)
  {
    const double q = -2.0 * alpha * (k_plus + 1.0);
    if (q >= -kParamTol) {
      const double s3 = std::sqrt(std::max(q, 0.0));
      const double tau = (s3 - s.x2) / alpha;
      if (s3 <= 1.0 + kParamTol && tau >= -kTauTol) {
        out.push_back({Family::SquareAB, SquareSide{Side::AB, std::min(s3, 1.0)}, std::max(tau, 0.0),
                       1.0, std::nullopt});
      }
    }
  }
  const double k_corner = -1.0 + ia;  // u = -1 parabola through A
  // pre-switch arc into A (shared by every cone normal that has not switched yet)
  {
    const double tau = (s.x2 - 1.0) / alpha;
    if (std::abs(k_minus - k_corner) <= 1e-11 * (1.0 + std::abs(k_minus)) && tau >= -kTauTol) {
      out.push_back({Family::SquarePreA, SquareCorner{Corner::A, 0.5 * kPi}, std::max(tau, 0.0), -1.0,
                     std::nullopt});
    }
  }
  // post-switch: u = +1 parabola meets the A curve at x2 = sqrt(alpha (k_corner - k_plus))
  {
    const double q = alpha * (k_corner - k_plus);
    if (q >= 1.0 - kParamTol) {
      const double s2 = std::max(1.0, std::sqrt(q));
      const State sw{k_corner - s2 * s2 * ia, s2};
      if (s.x2 <= sw.x2 + kTauTol) {
        const double ts = (s2 - 1.0) / alpha;
        const double tau = ts + std::max(0.0, sw.x2 - s.x2) / alpha;
        out.push_back({Family::SquarePostA, SquareCorner{Corner::A, kPi - std::atan(ts)}, tau, 1.0, sw});
      }
    }
  }
}

inline void upper_candidates(const Manifold& m, const Params& params, State s,
                             std::vector<Candidate>& out) {
  if (m.is_circle()) {
    const double l = m.radius();
    const double phi_lo = l <= params.alpha() ? 0.0 : circle_theta_bar(l, params.alpha());
    circle_pre_upper(l, params.alpha(), phi_lo, s, out);
    circle_post_upper(l, params.alpha(), s, out);
  } else {
    square_upper(params.alpha(), s, out);
  }
}

/// All characteristics through s, lower families obtained by reflecting the
/// upper ones evaluated at -s.
inline std::vector<Candidate> candidates(const Manifold& m, const Params& params, State s) {
  std::vector<Candidate> out;
  upper_candidates(m, params, s, out);
  std::vector<Candidate> mirrored;
  upper_candidates(m, params, -s, mirrored);
  for (const auto& c : mirrored) out.push_back(reflect(c));
  return out;
}

inline bool is_lower(Family f) { return static_cast<int>(f) >= 6; }

/// Smallest time-to-go. Near-ties go to the arc with no switch left, which
/// carries the control after crossing, then to the upper families in the
/// upper half plane and the lower ones in the other, so that the choice
/// commutes with s -> -s. A tied switch sitting on s itself is still
/// reported.
inline std::optional<Candidate> select(const std::vector<Candidate>& cands, State s) {
  if (cands.empty()) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) best = std::min(best, c.tau);
  const bool upper_half = s.x2 > 0.0 || (s.x2 == 0.0 && s.x1 < 0.0);
  const auto rank = [&](const Candidate& c) {
    return std::tuple(c.switch_state.has_value(), is_lower(c.family) == upper_half, c.tau);
  };
  const Candidate* pick = nullptr;
  for (const auto& c : cands) {
    if (c.tau > best + kTauTol) continue;
    if (pick == nullptr || rank(c) < rank(*pick)) pick = &c;
  }
  Candidate out = *pick;
  if (!out.switch_state) {
    for (const auto& c : cands) {
      if (c.tau > best + kTauTol || !c.switch_state || c.u == out.u) continue;
      if (norm(*c.switch_state - s) <= 1e-9 * (1.0 + norm(s))) {
        out.switch_state = c.switch_state;
        out.terminal = c.terminal;
        break;
      }
    }
  }
  return out;
}

inline SynthesisResult to_result(const Candidate& c) {
  return {c.u, c.tau, c.terminal, c.switch_state, false, c.family};
}

/// Lower envelope of the characteristic families, no jump detection.
inline std::optional<SynthesisResult> synthesize(const Manifold& m, const Params& params, State s) {
  if (in_interior(m, s)) throw AlreadyTerminated();
  if (std::abs(signed_distance(m, s)) <= kBoundaryTolerance) {
    const BoundaryPoint b = project_to_boundary(m, s);
    if (classify(m, b, params) == RegionClass::UP) {
      const Characteristic ch = characteristic(m, b, params);
      Family fam = Family::CirclePreUpper;
      if (const auto* sd = std::get_if<SquareSide>(&b)) {
        fam = sd->side == Side::AD   ? Family::SquareAD
              : sd->side == Side::AB ? Family::SquareAB
              : sd->side == Side::BC ? Family::SquareBC
                                     : Family::SquareCD;
      } else if (const auto* cr = std::get_if<SquareCorner>(&b)) {
        fam = cr->corner == Corner::A ? Family::SquarePreA : Family::SquarePreC;
      } else if (s.x2 < 0.0) {
        fam = Family::CirclePreLower;
      }
      return SynthesisResult{ch.arcs.front().control, 0.0, b, std::nullopt, false, fam};
    }
  }
  const auto best = select(candidates(m, params, s), s);
  if (!best) return std::nullopt;
  return to_result(*best);
}

}  // namespace detail

struct FeedbackOptions {
  /// Probe the value at +-probe along both axes and flag jumps.
  bool detect_discontinuity = true;
  double probe = 1e-9;
  double jump_threshold = 1e-3;
};

/// Optimal state feedback: control of the fastest characteristic through s.
/// Within `probe` of a locus the result is flagged. Across a true jump (the
/// gap does not shrink with the probe distance) the smaller-time side is
/// returned; on a steep but continuous front the value at s is kept.
inline SynthesisResult feedback(const Manifold& m, const Params& params, State s,
                                const FeedbackOptions& opts = {}) {
  auto res = detail::synthesize(m, params, s);
  if (!res) throw DomainError("no terminating characteristic passes through this state");
  if (!opts.detect_discontinuity || res->time_to_go == 0.0) return *res;
  std::optional<SynthesisResult> lower;
  bool flag = false;
  for (const State d : {State{1.0, 0.0}, State{-1.0, 0.0}, State{0.0, 1.0}, State{0.0, -1.0}}) {
    const State p = s + opts.probe * d;
    if (in_interior(m, p)) continue;
    const auto near = detail::synthesize(m, params, p);
    if (!near) continue;
    const double gap = res->time_to_go - near->time_to_go;
    if (std::abs(gap) <= opts.jump_threshold) continue;
    flag = true;
    if (gap < 0.0 || (lower && near->time_to_go >= lower->time_to_go)) continue;
    const State q = s + (100.0 * opts.probe) * d;
    if (in_interior(m, q)) continue;
    const auto far = detail::synthesize(m, params, q);
    if (far && std::abs(far->time_to_go - near->time_to_go) <= 0.5 * gap) lower = near;
  }
  if (lower) res = lower;
  res->discontinuity_flag = flag;
  return *res;
}

/// Minimum time-to-go to the usable part.
inline double value(const Manifold& m, const Params& params, State s,
                    const FeedbackOptions& opts = {}) {
  return feedback(m, params, s, opts).time_to_go;
}

/// Classical bang-bang law for the point target at the origin.
inline double point_target_reference(State s) {
  if (s.x1 == 0.0 && s.x2 == 0.0) throw AlreadyTerminated();
  const double sigma = s.x1 + 0.5 * s.x2 * std::abs(s.x2);
  if (sigma > 0.0) return -1.0;
  if (sigma < 0.0) return 1.0;
  return s.x2 > 0.0 ? -1.0 : 1.0;
}

/// Switching curve of the synthesized law. Circle branches are anchored at
/// the BUP points (-l, 0) and (l, 0) and parameterized by the anchor angle;
/// the square branches are the parabolas through A and C parameterized by x2.
struct SwitchingCurve {
  enum class Branch { CircleUpper, CircleLower, SquareA, SquareC };

  Branch branch = Branch::CircleUpper;
  BoundaryPoint anchor;
  double param_lo = 0.0;
  double param_hi = 0.0;
  double alpha = 1.0;
  double l = 1.0;

  std::string id() const {
    switch (branch) {
      case Branch::CircleUpper: return "c";
      case Branch::CircleLower: return "d";
      case Branch::SquareA: return "A";
      case Branch::SquareC: return "C";
    }
    return "?";
  }

  /// Point at the parameter: anchor angle for circles, x2 for the square.
  State at(double p) const {
    switch (branch) {
      case Branch::CircleUpper: {
        const double c = std::cos(p), t = std::tan(p);
        return {l / c - 0.5 * alpha * t * t, l * std::sin(p) - alpha * t};
      }
      case Branch::CircleLower: {
        const double c = std::cos(p), t = std::tan(p);
        return {l / c + 0.5 * alpha * t * t, l * std::sin(p) + alpha * t};
      }
      case Branch::SquareA:
      case Branch::SquareC: return {x1_of_x2(p), p};
    }
    return {};
  }

  /// Explicit square parabolas; throws outside the branch domain.
  double x1_of_x2(double x2) const {
    const double ia = 1.0 / (2.0 * alpha);
    if (branch == Branch::SquareA) {
      if (x2 < 1.0) throw DomainError("A switching curve is defined for x2 >= 1");
      return -x2 * x2 * ia - 1.0 + ia;
    }
    if (branch == Branch::SquareC) {
      if (x2 > -1.0) throw DomainError("C switching curve is defined for x2 <= -1");
      return x2 * x2 * ia + 1.0 - ia;
    }
    throw DomainError("x1(x2) form exists only for the square branches");
  }

  /// Explicit radical form x2(x1) of the circle branches (alpha = 1 only).
  std::optional<double> x2_of_x1(double x1) const {
    if (alpha != 1.0) return std::nullopt;
    if (branch == Branch::CircleUpper) {
      if (x1 > -l) return std::nullopt;
      const double r = std::sqrt(l * l + 1.0 - 2.0 * x1);
      return std::sqrt(2.0) * r / (r - l) * std::sqrt(std::max(0.0, l * l - x1 - l * r));
    }
    if (branch == Branch::CircleLower) {
      if (x1 < l) return std::nullopt;
      const double r = std::sqrt(l * l + 1.0 + 2.0 * x1);
      return -std::sqrt(2.0) * r / (r - l) * std::sqrt(std::max(0.0, l * l + x1 - l * r));
    }
    return std::nullopt;
  }

  /// n points from the anchor outwards, switch times up to tau_max.
  std::vector<State> sample(int n, double tau_max) const {
    std::vector<State> pts;
    for (int k = 0; k < n; ++k) {
      const double ts = tau_max * k / std::max(1, n - 1);
      switch (branch) {
        case Branch::CircleUpper: pts.push_back(at(kPi - std::atan(ts))); break;
        case Branch::CircleLower: pts.push_back(at(kTwoPi - std::atan(ts))); break;
        case Branch::SquareA: pts.push_back(at(1.0 + alpha * ts)); break;
        case Branch::SquareC: pts.push_back(at(-1.0 - alpha * ts)); break;
      }
    }
    return pts;
  }
};

enum class CircleBranch { Upper, Lower };  // curves (c) and (d)
enum class SquareBranch { A, C };

inline SwitchingCurve switching_curve_circle(const Params& params, CircleBranch branch) {
  SwitchingCurve sc;
  sc.alpha = params.alpha();
  sc.l = params.l();
  if (branch == CircleBranch::Upper) {
    sc.branch = SwitchingCurve::Branch::CircleUpper;
    sc.anchor = CircleTheta{kPi};
    sc.param_lo = 0.5 * kPi;
    sc.param_hi = kPi;
  } else {
    sc.branch = SwitchingCurve::Branch::CircleLower;
    sc.anchor = CircleTheta{0.0};
    sc.param_lo = 1.5 * kPi;
    sc.param_hi = kTwoPi;
  }
  return sc;
}

inline SwitchingCurve switching_curve_square(SquareBranch branch, const Params& params) {
  SwitchingCurve sc;
  sc.alpha = params.alpha();
  if (branch == SquareBranch::A) {
    sc.branch = SwitchingCurve::Branch::SquareA;
    sc.anchor = SquareCorner{Corner::A, kPi};
    sc.param_lo = 1.0;
    sc.param_hi = std::numeric_limits<double>::infinity();
  } else {
    sc.branch = SwitchingCurve::Branch::SquareC;
    sc.anchor = SquareCorner{Corner::C, kTwoPi};
    sc.param_lo = -std::numeric_limits<double>::infinity();
    sc.param_hi = -1.0;
  }
  return sc;
}

inline SwitchingCurve switching_curve_square(SquareBranch branch) {
  return switching_curve_square(branch, Params::make(1.0, 1.0));
}

/// Optimal trajectory that grazes the target at a non-usable point and ends
/// later on the UP. `points` run in forward time and end on the target.
struct TouchAndGoCurve {
  std::string id;
  State graze;
  BoundaryPoint terminal;
  double control_at_graze = 0.0;
  std::vector<State> points;
  /// For the square: x1 = sign * x2^2 / (2 alpha) + offset.
  std::optional<std::array<double, 2>> parabola;
};

inline std::vector<TouchAndGoCurve> touch_and_go_curves(const Manifold& m, const Params& params,
                                                        int n = 200, double extent = 6.0) {
  const double alpha = params.alpha();
  std::vector<TouchAndGoCurve> out;
  if (m.is_square()) {
    const double ia = 1.0 / (2.0 * alpha);
    // through B with u = +1, continuing to A
    TouchAndGoCurve b{"B", State{-1.0, -1.0}, SquareCorner{Corner::A, kPi}, 1.0, {},
                      std::array<double, 2>{1.0, -1.0 - ia}};
    for (int k = 0; k < n; ++k) {
      const double x2 = -1.0 - extent + (extent + 2.0) * k / (n - 1);
      b.points.push_back({x2 * x2 * ia - 1.0 - ia, x2});
    }
    TouchAndGoCurve d{"D", State{1.0, 1.0}, SquareCorner{Corner::C, kTwoPi}, -1.0, {},
                      std::array<double, 2>{-1.0, 1.0 + ia}};
    for (const State& p : b.points) d.points.push_back(-p);
    out.push_back(std::move(b));
    out.push_back(std::move(d));
    return out;
  }
  const double l = m.radius();
  if (l <= alpha) return out;
  // Grazes at theta_bar with u = -1, then follows the lower family: switch on
  // curve (d), finish with u = +1.
  const double tb = circle_theta_bar(l, alpha);
  const State g{l * std::cos(tb), l * std::sin(tb)};
  std::vector<detail::Candidate> lower;
  detail::upper_candidates(m, params, -g, lower);
  const detail::Candidate* post = nullptr;
  for (const auto& c : lower) {
    if (c.family == Family::CirclePostUpper) post = &c;
  }
  if (post == nullptr) return out;
  const detail::Candidate mirror = detail::reflect(*post);
  const State sw = *mirror.switch_state;
  const BoundaryPoint term = mirror.terminal;
  const State anchor = boundary_state(m, term);
  TouchAndGoCurve a{"a", g, term, -1.0, {}, std::nullopt};
  // u = -1 from x2 = g.x2 + extent down to the switch, then u = +1 to the anchor
  const double top = g.x2 + extent;
  for (int k = 0; k < n; ++k) {
    const double x2 = top + (sw.x2 - top) * k / (n - 1);
    a.points.push_back({sw.x1 + (sw.x2 * sw.x2 - x2 * x2) / (2.0 * alpha), x2});
  }
  for (int k = 1; k < n; ++k) {
    const double x2 = sw.x2 + (anchor.x2 - sw.x2) * k / (n - 1);
    a.points.push_back({sw.x1 + (x2 * x2 - sw.x2 * sw.x2) / (2.0 * alpha), x2});
  }
  TouchAndGoCurve b{"b", -g, reflect(term), 1.0, {}, std::nullopt};
  for (const State& p : a.points) b.points.push_back(-p);
  out.push_back(std::move(a));
  out.push_back(std::move(b));
  return out;
}

}  // namespace mintime

#endif  // MINTIME_SYNTHESIS_HPP
