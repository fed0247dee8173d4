#ifndef MINTIME_MODEL_HPP
#define MINTIME_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace mintime {

/// Raised when an operation is called outside its domain (bad parameters,
/// mismatched target and boundary point, control out of bounds, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimensional description of the point mass on a line.
struct PhysicalParams {
  double mass = 1.0;            // kg
  double f_max = 1.0;           // N
  double char_length = 1.0;     // m
  double char_velocity = 1.0;   // m/s
};

/// Non-dimensional problem constants. The terminal weight beta is carried
/// for completeness but every closed form in this library assumes beta = 1.
class Params {
 public:
  static Params make(double alpha, double l, double beta = 1.0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw DomainError("alpha must be positive and finite");
    }
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw DomainError("l must be positive and finite");
    }
    if (beta != 1.0) {
      throw DomainError("only beta = 1 is supported");
    }
    return Params(alpha, l);
  }

  double alpha() const { return alpha_; }
  double l() const { return l_; }
  double beta() const { return 1.0; }

 private:
  Params(double alpha, double l) : alpha_(alpha), l_(l) {}
  double alpha_;
  double l_;
};

/// Point (x1, x2) = (position, velocity) of the phase plane.
struct State {
  double x1 = 0.0;
  double x2 = 0.0;

  friend State operator+(State a, State b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend State operator-(State a, State b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend State operator-(State a) { return {-a.x1, -a.x2}; }
  friend State operator*(double k, State a) { return {k * a.x1, k * a.x2}; }
  friend bool operator==(const State&, const State&) = default;
};

/// Time derivative of a State; same layout.
using StateDerivative = State;

inline double norm(State s) { return std::hypot(s.x1, s.x2); }

inline void check_control(double u) {
  if (!(std::abs(u) <= 1.0)) {
    throw DomainError("control must satisfy |u| <= 1, got " + std::to_string(u));
  }
}

/// alpha = L F_max / (m V^2); the tolerance radius l is a separate design input.
inline Params nondimensionalize(const PhysicalParams& p, double l = 1.0) {
  if (!(p.mass > 0.0) || !(p.f_max > 0.0) || !(p.char_length > 0.0) ||
      !(p.char_velocity > 0.0)) {
    throw DomainError("physical parameters must be strictly positive");
  }
  const double alpha =
      p.char_length * p.f_max / (p.mass * p.char_velocity * p.char_velocity);
  return Params::make(alpha, l);
}

/// Double integrator: dx1/dt = x2, dx2/dt = alpha u.
inline StateDerivative dynamics(State s, double u, const Params& params) {
  check_control(u);
  return {s.x2, params.alpha() * u};
}

/// State reached after holding the control u for time t (exact).
inline State propagate(State s, double u, double t, const Params& params) {
  const double a = params.alpha() * u;
  return {s.x1 + s.x2 * t + 0.5 * a * t * t, s.x2 + a * t};
}

inline double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace mintime

#endif  // MINTIME_MODEL_HPP
