#ifndef MINTIME_IO_HPP
#define MINTIME_IO_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mintime/characteristics.hpp"
#include "mintime/isochrone.hpp"
#include "mintime/manifold.hpp"
#include "mintime/oracle.hpp"
#include "mintime/simulator.hpp"

// CSV exports. Numbers use %.12g so output is identical across runs.

namespace mintime::io {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Polyline = std::pair<std::string, std::vector<State>>;

inline void write_boundary_csv(std::ostream& os, const std::vector<BoundarySample>& samples) {
  os << "kind,param,x1,x2,n1,n2,class\n";
  for (const auto& s : samples) {
    os << boundary_kind(s.point) << ',' << num(boundary_param(s.point)) << ',' << num(s.state.x1) << ','
       << num(s.state.x2) << ',' << num(s.normal.n1) << ',' << num(s.normal.n2) << ',' << to_string(s.region)
       << '\n';
  }
}

inline void write_flow_csv(std::ostream& os, const std::vector<FlowSample>& rows) {
  os << "anchor_kind,anchor_param,tau,x1,x2,lambda1,lambda2,u\n";
  for (const auto& r : rows) {
    os << boundary_kind(r.anchor) << ',' << num(boundary_param(r.anchor)) << ',' << num(r.tau) << ','
       << num(r.x.x1) << ',' << num(r.x.x2) << ',' << num(r.costate.lambda1) << ',' << num(r.costate.lambda2)
       << ',' << num(r.u) << '\n';
  }
}

inline void write_curves_csv(std::ostream& os, const std::vector<Polyline>& curves) {
  os << "curve_id,x1,x2\n";
  for (const auto& [id, pts] : curves) {
    for (const State& p : pts) os << id << ',' << num(p.x1) << ',' << num(p.x2) << '\n';
  }
}

inline void write_isochrone_csv(std::ostream& os, const std::vector<Isochrone>& isos) {
  os << "tau,theta_or_param,x1,x2,family\n";
  for (const auto& iso : isos) {
    for (const auto& p : iso.points) {
      os << num(iso.tau) << ',' << num(p.param) << ',' << num(p.x.x1) << ',' << num(p.x.x2) << ',' << p.family
         << '\n';
    }
  }
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,x1,x2,u\n";
  for (const auto& s : tr.samples) {
    os << num(s.t) << ',' << num(s.x.x1) << ',' << num(s.x.x2) << ',' << num(s.u) << '\n';
  }
}

inline void write_oracle_csv(std::ostream& os, const OracleReport& rep) {
  os << "x1,x2,oracle,synthesis,abs_error,excluded\n";
  for (const auto& r : rep.rows) {
    if (r.inside) continue;
    os << num(r.state.x1) << ',' << num(r.state.x2) << ',' << num(r.oracle) << ',' << num(r.synthesis) << ','
       << num(r.abs_error) << ',' << (r.excluded ? 1 : 0) << '\n';
  }
}

}  // namespace mintime::io

#endif  // MINTIME_IO_HPP
