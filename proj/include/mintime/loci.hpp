#ifndef MINTIME_LOCI_HPP
#define MINTIME_LOCI_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mintime/synthesis.hpp"

namespace mintime {

struct LociOptions {
  double half_width = 6.0;
  double step = 0.025;
  /// Bisection stops at this bracket width.
  double resolution = 1e-10;
  /// A scan step is bisected when its value change exceeds this multiple of
  /// the smaller neighbouring change.
  double prefilter = 3.0;
  /// Smallest gap left once the bracket is resolved. A Lipschitz function
  /// cannot keep this across 1e-10, a jump or an infinite-slope front can.
  double min_gap = 1e-3;
};

struct LocusPoint {
  State x;
  /// Values just below and above the locus along the scan direction.
  double v_lo = 0.0;
  double v_hi = 0.0;
  /// The low side's family has no continuation across the locus.
  bool limiting = false;
};

struct Locus {
  std::string id;
  std::vector<LocusPoint> points;  // ordered along the curve
};

namespace detail {

inline double core_value(const Manifold& m, const Params& params, State s) {
  if (in_interior(m, s)) return std::numeric_limits<double>::quiet_NaN();
  const auto r = synthesize(m, params, s);
  return r ? r->time_to_go : std::numeric_limits<double>::quiet_NaN();
}

// Low-side winner has no nearby continuation on the high side.
inline bool limiting_across(const Manifold& m, const Params& params, State lo_side, State hi_side) {
  const auto lo = select(candidates(m, params, lo_side), lo_side);
  if (!lo) return false;
  for (const auto& c : candidates(m, params, hi_side)) {
    if (c.family == lo->family && std::abs(c.tau - lo->tau) < 1e-4) return false;
  }
  return true;
}

inline std::optional<LocusPoint> resolve_jump(const Manifold& m, const Params& params, State a, State b,
                                              double va, double vb, const LociOptions& opts) {
  for (int it = 0; it < 200 && norm(b - a) > opts.resolution; ++it) {
    const State mid = 0.5 * (a + b);
    const double vm = core_value(m, params, mid);
    if (std::isnan(vm)) return std::nullopt;
    if (std::abs(vm - va) >= std::abs(vm - vb)) {
      b = mid;
      vb = vm;
    } else {
      a = mid;
      va = vm;
    }
  }
  if (std::abs(va - vb) <= opts.min_gap) return std::nullopt;
  LocusPoint p;
  p.x = 0.5 * (a + b);
  p.v_lo = std::min(va, vb);
  p.v_hi = std::max(va, vb);
  const State d = b - a;
  const State off = (1e-7 / norm(d)) * d;
  const State lo_side = va < vb ? p.x - off : p.x + off;
  const State hi_side = va < vb ? p.x + off : p.x - off;
  if (!in_interior(m, lo_side) && !in_interior(m, hi_side)) {
    p.limiting = limiting_across(m, params, lo_side, hi_side);
  }
  return p;
}

// Greedy nearest-neighbour chain starting from an end of the cloud.
inline std::vector<LocusPoint> order_chain(std::vector<LocusPoint> pts) {
  if (pts.size() < 3) return pts;
  State c{0.0, 0.0};
  for (const auto& p : pts) c = c + p.x;
  c = (1.0 / pts.size()) * c;
  std::size_t start = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = norm(pts[i].x - c);
    if (d > far) {
      far = d;
      start = i;
    }
  }
  std::vector<LocusPoint> out;
  std::vector<bool> used(pts.size(), false);
  std::size_t cur = start;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    used[cur] = true;
    out.push_back(pts[cur]);
    double best = std::numeric_limits<double>::infinity();
    std::size_t next = cur;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (used[j]) continue;
      const double d = norm(pts[j].x - pts[cur].x);
      if (d < best) {
        best = d;
        next = j;
      }
    }
    if (next == cur) break;
    cur = next;
  }
  return out;
}

}  // namespace detail

/// Curves across which the time-to-go jumps, or, when the target is small
/// enough that the grazing point has zero velocity, rises with unbounded
/// slope. The plane is scanned along grid rows and columns; outlying steps
/// are bisected down to the locus and kept if the gap survives. Connected
/// pieces are labelled (a) (upper half plane) and (b).
inline std::vector<Locus> discontinuity_loci(const Manifold& m, const Params& params,
                                             const LociOptions& opts = {}) {
  const int n = static_cast<int>(std::lround(opts.half_width / opts.step));
  const int w = 2 * n + 1;
  const auto at = [&](int i, int j) { return State{(i - n) * opts.step, (j - n) * opts.step}; };
  std::vector<double> v(static_cast<std::size_t>(w) * w);
  for (int j = 0; j < w; ++j) {
    for (int i = 0; i < w; ++i) v[static_cast<std::size_t>(j) * w + i] = detail::core_value(m, params, at(i, j));
  }
  const auto val = [&](int i, int j) { return v[static_cast<std::size_t>(j) * w + i]; };

  std::vector<LocusPoint> found;
  // line scans: dir 0 along x1, dir 1 along x2
  for (int dir = 0; dir < 2; ++dir) {
    for (int line = 0; line < w; ++line) {
      const auto get = [&](int k) { return dir == 0 ? val(k, line) : val(line, k); };
      const auto pos = [&](int k) { return dir == 0 ? at(k, line) : at(line, k); };
      for (int k = 0; k + 1 < w; ++k) {
        const double v0 = get(k), v1 = get(k + 1);
        if (std::isnan(v0) || std::isnan(v1)) continue;
        const double jump = std::abs(v1 - v0);
        if (jump <= opts.min_gap) continue;
        double lip = std::numeric_limits<double>::infinity();
        if (k > 0 && !std::isnan(get(k - 1))) lip = std::min(lip, std::abs(v0 - get(k - 1)));
        if (k + 2 < w && !std::isnan(get(k + 2))) lip = std::min(lip, std::abs(get(k + 2) - v1));
        if (!std::isfinite(lip) || jump <= opts.prefilter * lip) continue;
        if (auto p = detail::resolve_jump(m, params, pos(k), pos(k + 1), v0, v1, opts)) found.push_back(*p);
      }
    }
  }

  // connected components; a few scan lines may miss the prefilter
  const double link = 8.0 * opts.step;
  std::vector<int> comp(found.size(), -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < found.size(); ++b) {
        if (comp[b] < 0 && norm(found[b].x - found[a].x) <= link) {
          comp[b] = ncomp;
          stack.push_back(b);
        }
      }
    }
    ++ncomp;
  }
  std::vector<std::vector<LocusPoint>> pieces(static_cast<std::size_t>(ncomp));
  for (std::size_t i = 0; i < found.size(); ++i) pieces[static_cast<std::size_t>(comp[i])].push_back(found[i]);

  // label: pieces whose centroid lies in the upper half plane (or on the
  // axis, to the left) are (a); the rest (b)
  std::vector<Locus> out;
  int na = 0, nb = 0;
  std::vector<std::pair<State, std::vector<LocusPoint>>> sorted;
  for (auto& p : pieces) {
    State c{0.0, 0.0};
    for (const auto& q : p) c = c + q.x;
    c = (1.0 / p.size()) * c;
    sorted.emplace_back(c, detail::order_chain(std::move(p)));
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second.size() != b.second.size() ? a.second.size() > b.second.size() : a.first.x2 > b.first.x2;
  });
  for (auto& [c, pts] : sorted) {
    const bool upper = c.x2 > 0.0 || (c.x2 == 0.0 && c.x1 < 0.0);
    Locus lc;
    lc.id = upper ? (na++ == 0 ? "a" : "a" + std::to_string(na)) : (nb++ == 0 ? "b" : "b" + std::to_string(nb));
    lc.points = std::move(pts);
    out.push_back(std::move(lc));
  }
  std::sort(out.begin(), out.end(), [](const Locus& a, const Locus& b) { return a.id < b.id; });
  return out;
}

/// Distance from a state to the nearest locus polyline.
inline double distance_to_loci(const std::vector<Locus>& loci, State s, double max_link = 0.2) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& lc : loci) {
    const auto& p = lc.points;
    for (std::size_t i = 0; i < p.size(); ++i) {
      best = std::min(best, norm(s - p[i].x));
      if (i + 1 == p.size()) continue;
      const State a = p[i].x, b = p[i + 1].x;
      const State d = b - a;
      const double len2 = d.x1 * d.x1 + d.x2 * d.x2;
      if (len2 == 0.0 || len2 > max_link * max_link) continue;
      const State e = s - a;
      const double t = std::clamp((e.x1 * d.x1 + e.x2 * d.x2) / len2, 0.0, 1.0);
      best = std::min(best, norm(s - (a + t * d)));
    }
  }
  return best;
}

}  // namespace mintime

#endif  // MINTIME_LOCI_HPP
