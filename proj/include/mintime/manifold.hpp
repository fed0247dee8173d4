#ifndef MINTIME_MANIFOLD_HPP
#define MINTIME_MANIFOLD_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "mintime/model.hpp"

namespace mintime {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Inner products with |value| <= this are treated as exactly zero (BUP).
inline constexpr double kBupTolerance = 1e-12;

/// Terminal set: disk of radius l, or the unit square {|x1| <= 1, |x2| <= 1}.
class Manifold {
 public:
  enum class Kind { Circle, Square };

  static Manifold circle(double l) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("circle radius must be positive");
    return Manifold(Kind::Circle, l);
  }
  static Manifold square() { return Manifold(Kind::Square, 1.0); }

  Kind kind() const { return kind_; }
  bool is_circle() const { return kind_ == Kind::Circle; }
  bool is_square() const { return kind_ == Kind::Square; }
  /// Circle radius; half side (1) for the square.
  double radius() const { return size_; }

 private:
  Manifold(Kind k, double size) : kind_(k), size_(size) {}
  Kind kind_;
  double size_;
};

// Square vertices: A = (-1, 1), B = (-1, -1), C = (1, -1), D = (1, 1).
enum class Side { AB, BC, CD, AD };
enum class Corner { A, C };

inline const char* to_string(Side s) {
  switch (s) {
    case Side::AB: return "AB";
    case Side::BC: return "BC";
    case Side::CD: return "CD";
    case Side::AD: return "AD";
  }
  return "?";
}
inline const char* to_string(Corner c) { return c == Corner::A ? "A" : "C"; }

/// Point on the circle at angle theta in [0, 2 pi).
struct CircleTheta {
  double theta = 0.0;
};

/// Point on a side of the square. The side coordinate s runs over [-1, 1]:
/// s = x2 on AB and CD, s = x1 on BC and AD.
struct SquareSide {
  Side side = Side::AB;
  double s = 0.0;
};

/// Vertex A or C together with one normal of its cone,
/// theta in [pi/2, pi] at A and [3 pi/2, 2 pi] at C.
struct SquareCorner {
  Corner corner = Corner::A;
  double theta = 0.0;
};

using BoundaryPoint = std::variant<CircleTheta, SquareSide, SquareCorner>;

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

inline BoundaryPoint circle_point(double theta) {
  if (!std::isfinite(theta)) throw DomainError("circle angle must be finite");
  return CircleTheta{wrap_angle(theta)};
}

inline BoundaryPoint side_point(Side side, double s) {
  if (!(s >= -1.0 && s <= 1.0)) throw DomainError("side parameter must lie in [-1, 1]");
  return SquareSide{side, s};
}

inline double corner_cone_lo(Corner c) { return c == Corner::A ? 0.5 * kPi : 1.5 * kPi; }
inline double corner_cone_hi(Corner c) { return c == Corner::A ? kPi : kTwoPi; }

inline BoundaryPoint corner_point(Corner c, double theta) {
  if (!(theta >= corner_cone_lo(c) && theta <= corner_cone_hi(c))) {
    throw DomainError(std::string("cone angle outside the normal cone at ") + to_string(c));
  }
  return SquareCorner{c, theta};
}

inline void check_kind(const Manifold& m, const BoundaryPoint& b) {
  const bool circle_point = std::holds_alternative<CircleTheta>(b);
  if (circle_point != m.is_circle()) {
    throw DomainError("boundary point does not belong to this target");
  }
}

inline State boundary_state(const Manifold& m, const BoundaryPoint& b) {
  check_kind(m, b);
  if (const auto* c = std::get_if<CircleTheta>(&b)) {
    return {m.radius() * std::cos(c->theta), m.radius() * std::sin(c->theta)};
  }
  if (const auto* sd = std::get_if<SquareSide>(&b)) {
    switch (sd->side) {
      case Side::AB: return {-1.0, sd->s};
      case Side::BC: return {sd->s, -1.0};
      case Side::CD: return {1.0, sd->s};
      case Side::AD: return {sd->s, 1.0};
    }
  }
  const auto& cr = std::get<SquareCorner>(b);
  return cr.corner == Corner::A ? State{-1.0, 1.0} : State{1.0, -1.0};
}

struct Normal {
  double n1 = 0.0;
  double n2 = 0.0;
};

inline Normal outward_normal(const Manifold& m, const BoundaryPoint& b) {
  check_kind(m, b);
  if (const auto* c = std::get_if<CircleTheta>(&b)) {
    return {std::cos(c->theta), std::sin(c->theta)};
  }
  if (const auto* sd = std::get_if<SquareSide>(&b)) {
    switch (sd->side) {
      case Side::AB: return {-1.0, 0.0};
      case Side::BC: return {0.0, -1.0};
      case Side::CD: return {1.0, 0.0};
      case Side::AD: return {0.0, 1.0};
    }
  }
  const auto& cr = std::get<SquareCorner>(b);
  return {std::cos(cr.theta), std::sin(cr.theta)};
}

enum class RegionClass { UP, BUP, NUP };

inline const char* to_string(RegionClass r) {
  switch (r) {
    case RegionClass::UP: return "UP";
    case RegionClass::BUP: return "BUP";
    case RegionClass::NUP: return "NUP";
  }
  return "?";
}

/// min over |u| <= 1 of <n, f(x, u)> at the boundary point.
inline double penetration(const Manifold& m, const BoundaryPoint& b, const Params& params) {
  const State x = boundary_state(m, b);
  const Normal n = outward_normal(m, b);
  return n.n1 * x.x2 - params.alpha() * std::abs(n.n2);
}

inline bool is_vertex_b_or_d(const BoundaryPoint& b) {
  const auto* sd = std::get_if<SquareSide>(&b);
  if (sd == nullptr) return false;
  return (sd->side == Side::BC && sd->s == -1.0) || (sd->side == Side::AD && sd->s == 1.0);
}

inline RegionClass classify(const Manifold& m, const BoundaryPoint& b, const Params& params) {
  const double v = penetration(m, b, params);
  // B and D border the UP sides BC and AD but no optimal path ends there.
  if (is_vertex_b_or_d(b)) return RegionClass::BUP;
  if (std::abs(v) <= kBupTolerance) return RegionClass::BUP;
  return v < 0.0 ? RegionClass::UP : RegionClass::NUP;
}

/// One parameter interval of the usable part.
struct UpInterval {
  enum class Kind { CircleTheta, Side, Corner };
  Kind kind = Kind::CircleTheta;
  Side side = Side::AB;
  Corner corner = Corner::A;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double p) const {
    const bool above = lo_closed ? p >= lo : p > lo;
    const bool below = hi_closed ? p <= hi : p < hi;
    return above && below;
  }
};

/// theta_bar = acos(alpha / l); only defined when l > alpha.
inline double circle_theta_bar(double l, double alpha) { return std::acos(alpha / l); }

inline std::vector<UpInterval> up_intervals(const Manifold& m, const Params& params) {
  using K = UpInterval::Kind;
  if (m.is_circle()) {
    const double l = m.radius();
    // l == alpha is the first regime: no NUP.
    const double lo = l <= params.alpha() ? 0.0 : circle_theta_bar(l, params.alpha());
    return {UpInterval{K::CircleTheta, Side::AB, Corner::A, lo, kPi, false, false},
            UpInterval{K::CircleTheta, Side::AB, Corner::A, kPi + lo, kTwoPi, false, false}};
  }
  return {
      UpInterval{K::Side, Side::AB, Corner::A, 0.0, 1.0, false, true},
      UpInterval{K::Side, Side::BC, Corner::A, -1.0, 1.0, false, true},
      UpInterval{K::Side, Side::CD, Corner::A, -1.0, 0.0, true, false},
      UpInterval{K::Side, Side::AD, Corner::A, -1.0, 1.0, true, false},
      UpInterval{K::Corner, Side::AB, Corner::A, 0.5 * kPi, kPi, true, true},
      UpInterval{K::Corner, Side::AB, Corner::C, 1.5 * kPi, kTwoPi, true, true},
  };
}

/// True when the boundary point's parameter lies inside one of the UP intervals.
inline bool in_up_intervals(const Manifold& m, const BoundaryPoint& b, const Params& params) {
  for (const auto& iv : up_intervals(m, params)) {
    if (const auto* c = std::get_if<CircleTheta>(&b)) {
      if (iv.kind == UpInterval::Kind::CircleTheta && iv.contains(c->theta)) return true;
    } else if (const auto* sd = std::get_if<SquareSide>(&b)) {
      if (iv.kind == UpInterval::Kind::Side && iv.side == sd->side && iv.contains(sd->s)) return true;
    } else {
      const auto& cr = std::get<SquareCorner>(b);
      if (iv.kind == UpInterval::Kind::Corner && iv.corner == cr.corner && iv.contains(cr.theta)) {
        return true;
      }
    }
  }
  return false;
}

/// n anchors per UP interval, strictly inside open ends; the square corner
/// cones are closed and sampled end to end.
inline std::vector<BoundaryPoint> sample_up(const Manifold& m, const Params& params, int n) {
  std::vector<BoundaryPoint> out;
  for (const UpInterval& iv : up_intervals(m, params)) {
    for (int k = 0; k < n; ++k) {
      double p;
      if (iv.lo_closed && iv.hi_closed) {
        p = iv.lo + (iv.hi - iv.lo) * k / std::max(1, n - 1);
      } else {
        p = iv.lo + (iv.hi - iv.lo) * (k + 0.5) / n;
      }
      switch (iv.kind) {
        case UpInterval::Kind::CircleTheta: out.push_back(circle_point(p)); break;
        case UpInterval::Kind::Side: out.push_back(SquareSide{iv.side, p}); break;
        case UpInterval::Kind::Corner: out.push_back(SquareCorner{iv.corner, p}); break;
      }
    }
  }
  return out;
}

/// Closed target-set membership (boundary included).
inline bool contains(const Manifold& m, State s) {
  if (m.is_circle()) return s.x1 * s.x1 + s.x2 * s.x2 <= m.radius() * m.radius();
  return std::abs(s.x1) <= 1.0 && std::abs(s.x2) <= 1.0;
}

/// Positive outside, zero on the boundary, negative inside.
inline double signed_distance(const Manifold& m, State s) {
  if (m.is_circle()) return std::hypot(s.x1, s.x2) - m.radius();
  return std::max(std::abs(s.x1), std::abs(s.x2)) - 1.0;
}

/// States within this distance of the boundary count as on it, so that
/// boundary_state() output is never mistaken for an interior point.
inline constexpr double kBoundaryTolerance = 1e-12;

inline bool in_interior(const Manifold& m, State s) {
  return signed_distance(m, s) < -kBoundaryTolerance;
}

/// Boundary point nearest to a state lying on (or very near) the boundary.
/// Within corner_tol of A or C the bisecting cone normal is reported.
inline BoundaryPoint project_to_boundary(const Manifold& m, State s, double corner_tol = 1e-9) {
  if (m.is_circle()) return circle_point(std::atan2(s.x2, s.x1));
  const double ax = std::abs(s.x1), av = std::abs(s.x2);
  const auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  if (std::abs(ax - 1.0) <= corner_tol && std::abs(av - 1.0) <= corner_tol) {
    if (s.x1 < 0.0 && s.x2 > 0.0) return SquareCorner{Corner::A, 0.75 * kPi};
    if (s.x1 > 0.0 && s.x2 < 0.0) return SquareCorner{Corner::C, 1.75 * kPi};
  }
  if (ax >= av) {
    return SquareSide{s.x1 < 0.0 ? Side::AB : Side::CD, clamp1(s.x2)};
  }
  return SquareSide{s.x2 < 0.0 ? Side::BC : Side::AD, clamp1(s.x1)};
}

/// Central reflection of a boundary point: AB <-> CD, BC <-> AD, A <-> C.
inline BoundaryPoint reflect(const BoundaryPoint& b) {
  if (const auto* c = std::get_if<CircleTheta>(&b)) return circle_point(c->theta + kPi);
  if (const auto* sd = std::get_if<SquareSide>(&b)) {
    switch (sd->side) {
      case Side::AB: return SquareSide{Side::CD, -sd->s};
      case Side::BC: return SquareSide{Side::AD, -sd->s};
      case Side::CD: return SquareSide{Side::AB, -sd->s};
      case Side::AD: return SquareSide{Side::BC, -sd->s};
    }
  }
  const auto& cr = std::get<SquareCorner>(b);
  return SquareCorner{cr.corner == Corner::A ? Corner::C : Corner::A, cr.theta + kPi};
}

/// Kind label and scalar parameter, as used in the CSV exports.
inline std::string boundary_kind(const BoundaryPoint& b) {
  if (std::holds_alternative<CircleTheta>(b)) return "circle";
  if (const auto* sd = std::get_if<SquareSide>(&b)) return to_string(sd->side);
  return to_string(std::get<SquareCorner>(b).corner);
}

inline double boundary_param(const BoundaryPoint& b) {
  if (const auto* c = std::get_if<CircleTheta>(&b)) return c->theta;
  if (const auto* sd = std::get_if<SquareSide>(&b)) return sd->s;
  return std::get<SquareCorner>(b).theta;
}

struct BoundarySample {
  BoundaryPoint point;
  State state;
  Normal normal;
  RegionClass region;
};

/// Uniform sampling of the boundary. For the circle the analytic BUP angles
/// are merged into the uniform grid so they always appear.
inline std::vector<BoundarySample> sample_boundary(const Manifold& m, const Params& params, int n) {
  if (n < 1) throw DomainError("need at least one sample");
  std::vector<BoundaryPoint> pts;
  if (m.is_circle()) {
    std::vector<double> thetas;
    for (int k = 0; k < n; ++k) thetas.push_back(kTwoPi * k / n);
    thetas.push_back(0.0);
    thetas.push_back(kPi);
    if (m.radius() > params.alpha()) {
      const double tb = circle_theta_bar(m.radius(), params.alpha());
      thetas.push_back(tb);
      thetas.push_back(kPi + tb);
    }
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 thetas.end());
    for (double t : thetas) pts.push_back(CircleTheta{t});
  } else {
    for (Side side : {Side::AB, Side::BC, Side::CD, Side::AD}) {
      for (int k = 0; k <= n; ++k) pts.push_back(SquareSide{side, -1.0 + 2.0 * k / n});
    }
    for (Corner c : {Corner::A, Corner::C}) {
      for (int k = 0; k <= n; ++k) {
        const double lo = corner_cone_lo(c);
        pts.push_back(SquareCorner{c, lo + 0.5 * kPi * k / n});
      }
    }
  }
  std::vector<BoundarySample> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    out.push_back({p, boundary_state(m, p), outward_normal(m, p), classify(m, p, params)});
  }
  return out;
}

}  // namespace mintime

#endif  // MINTIME_MANIFOLD_HPP
