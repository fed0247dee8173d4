// Command-line front end: emits plot-ready CSV/JSON for every module.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mintime/io.hpp"
#include "mintime/loci.hpp"
#include "mintime/mintime.hpp"
#include "mintime/scenario.hpp"

namespace {

using namespace mintime;
namespace fs = std::filesystem;

constexpr int kExitDomain = 2;
constexpr int kExitVerify = 3;
constexpr int kExitUsage = 64;

struct Common {
  std::string scenario;
  std::string target = "circle";
  double l = 1.0;
  double alpha = 1.0;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--scenario", c.scenario, "JSON file with alpha, l, target (flags win)");
  sub->add_option("--target", c.target, "circle or square")->check(CLI::IsMember({"circle", "square"}));
  sub->add_option("--l", c.l, "circle radius (non-dimensional)");
  sub->add_option("--alpha", c.alpha, "control authority");
  sub->add_option("--out", c.out, "directory for output files (default: stdout)");
  sub->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

Scenario resolve(const Common& c, const CLI::App* sub) {
  Scenario s = c.scenario.empty() ? Scenario{} : load_scenario(c.scenario);
  if (c.scenario.empty() || sub->count("--target")) s.target = c.target;
  if (c.scenario.empty() || sub->count("--l")) s.l = c.l;
  if (c.scenario.empty() || sub->count("--alpha")) s.alpha = c.alpha;
  return s;
}

// CSV text to an array of row objects; numeric cells become numbers.
nlohmann::ordered_json csv_to_json(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::getline(in, line);
  const auto header = split(line);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  while (std::getline(in, line)) {
    const auto cells = split(line);
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (!cells[i].empty() && end == cells[i].c_str() + cells[i].size()) {
        row[header[i]] = v;
      } else {
        row[header[i]] = cells[i];
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Writes a table to stdout or to <out>/<stem>.<format>.
void emit_table(const Common& c, const std::string& stem, const std::function<void(std::ostream&)>& write) {
  std::ostringstream csv;
  write(csv);
  const std::string body = c.format == "json" ? csv_to_json(csv.str()).dump(1) + "\n" : csv.str();
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  fs::create_directories(c.out);
  const fs::path file = fs::path(c.out) / (stem + "." + c.format);
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << body;
}

void emit_json(const Common& c, const std::string& stem, const nlohmann::json& j) {
  if (c.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  fs::create_directories(c.out);
  const fs::path file = fs::path(c.out) / (stem + ".json");
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << j.dump(2) << '\n';
}

Side parse_side(const std::string& s) {
  if (s == "AB") return Side::AB;
  if (s == "BC") return Side::BC;
  if (s == "CD") return Side::CD;
  return Side::AD;
}

std::vector<double> tau_grid(const std::vector<double>& taus, double tmax, double dt) {
  if (!taus.empty()) return taus;
  if (!(dt > 0.0) || !(tmax >= 0.0)) throw DomainError("need dt > 0 and tmax >= 0");
  std::vector<double> out;
  const long n = std::lround(std::floor(tmax / dt + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(k * dt);
  return out;
}

nlohmann::json loci_summary(const std::vector<Locus>& loci) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& lc : loci) j.push_back({{"id", lc.id}, {"points", lc.points.size()}});
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal feedback synthesis for the double integrator with circle and square targets"};
  app.require_subcommand(1);

  Common c;
  int samples = 16;
  std::vector<double> taus;
  double x1 = 0.0, x2 = 0.0;
  double dt = 1e-3, tmax = 50.0;
  int grid = 41;
  double extent = 5.0;
  double step = 0.025;
  std::optional<double> theta, side_s;
  std::string side, corner;
  bool touch_and_go = false;

  auto* up = app.add_subcommand("up", "sample the target boundary and classify UP/BUP/NUP");
  add_common(up, c);
  up->add_option("--samples", samples, "uniform samples per circle or per square side")->check(CLI::PositiveNumber);

  auto* costate = app.add_subcommand("costate", "terminal and retrograde costate at a boundary point");
  add_common(costate, c);
  costate->add_option("--theta", theta, "circle angle or corner cone angle");
  costate->add_option("--side", side, "square side")->check(CLI::IsMember({"AB", "BC", "CD", "AD"}));
  costate->add_option("--s", side_s, "square side parameter");
  costate->add_option("--corner", corner, "square corner")->check(CLI::IsMember({"A", "C"}));
  costate->add_option("--tau", taus, "retrograde times")->delimiter(',');

  auto* flow = app.add_subcommand("flow", "optimal flow field from UP anchors");
  add_common(flow, c);
  flow->add_option("--samples", samples, "anchors per UP interval")->check(CLI::PositiveNumber);
  flow->add_option("--tau", taus, "retrograde times (default 0..tmax step dt)")->delimiter(',');
  flow->add_option("--tmax", tmax, "largest retrograde time (default 4)");
  flow->add_option("--dt", dt, "retrograde time step (default 0.1)");

  auto* curves = app.add_subcommand("switch-curves", "switching curves as polylines");
  add_common(curves, c);
  curves->add_option("--samples", samples, "points per curve")->check(CLI::Range(2, 1000000));
  curves->add_option("--tmax", tmax, "switch time at the far end of each curve");

  auto* loci = app.add_subcommand("loci", "value-discontinuity loci (or touch-and-go curves)");
  add_common(loci, c);
  loci->add_option("--step", step, "scan step")->check(CLI::PositiveNumber);
  loci->add_option("--extent", extent, "half width of the scanned box")->check(CLI::PositiveNumber);
  loci->add_flag("--touch-and-go", touch_and_go, "emit the touch-and-go trajectories instead");

  auto* iso = app.add_subcommand("isochrone", "level curves of the time-to-go");
  add_common(iso, c);
  iso->add_option("--tau", taus, "levels (default 1,...,8)")->delimiter(',');
  iso->add_option("--samples", samples, "samples per branch or UP interval")->check(CLI::Range(2, 1000000));

  auto* fb = app.add_subcommand("feedback", "optimal control at a state, as JSON");
  add_common(fb, c);
  fb->add_option("--x1", x1)->required();
  fb->add_option("--x2", x2)->required();

  auto* val = app.add_subcommand("value", "minimum time-to-go at a state");
  add_common(val, c);
  val->add_option("--x1", x1)->required();
  val->add_option("--x2", x2)->required();

  auto* sim = app.add_subcommand("simulate", "closed-loop rollout");
  add_common(sim, c);
  sim->add_option("--x1", x1)->required();
  sim->add_option("--x2", x2)->required();
  sim->add_option("--dt", dt, "integration step (default 1e-3)");
  sim->add_option("--tmax", tmax, "time limit (default 50)");

  auto* ver = app.add_subcommand("verify", "synthesis against the brute-force oracle on a grid");
  add_common(ver, c);
  ver->add_option("--grid", grid, "points per axis")->check(CLI::Range(2, 100001));
  ver->add_option("--extent", extent, "half width of the grid")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const Scenario sc = resolve(c, sub);
    const Manifold m = sc.manifold();
    const Params params = sc.params();

    if (sub == up) {
      const auto rows = sample_boundary(m, params, samples);
      emit_table(c, "up", [&](std::ostream& os) { io::write_boundary_csv(os, rows); });
    } else if (sub == costate) {
      BoundaryPoint b;
      if (!side.empty()) {
        if (!side_s) throw DomainError("--side needs --s");
        b = side_point(parse_side(side), *side_s);
      } else if (!corner.empty()) {
        if (!theta) throw DomainError("--corner needs --theta");
        b = corner_point(corner == "A" ? Corner::A : Corner::C, *theta);
      } else {
        if (!theta) throw DomainError("give --theta, --side/--s or --corner/--theta");
        b = circle_point(*theta);
      }
      const Characteristic ch = characteristic(m, b, params);
      nlohmann::json j;
      j["anchor"] = to_json(m, b);
      j["class"] = to_string(classify(m, b, params));
      const Costate c0 = terminal_costate(m, b, params);
      j["lambda1"] = c0.lambda1;
      j["lambda2"] = c0.lambda2;
      if (const auto ts = switch_tau(b)) {
        j["switch_tau"] = *ts;
      } else {
        j["switch_tau"] = nullptr;
      }
      j["samples"] = nlohmann::json::array();
      for (double t : taus.empty() ? std::vector<double>{0.0} : taus) {
        const Costate ct = costate_retro(m, b, params, t);
        const State x = ch.state_at(t, params);
        j["samples"].push_back({{"tau", t}, {"x1", x.x1}, {"x2", x.x2}, {"lambda1", ct.lambda1},
                                {"lambda2", ct.lambda2}, {"u", ch.control_at(t)}});
      }
      emit_json(c, "costate", j);
    } else if (sub == flow) {
      const auto rows = flow_field(m, params, sample_up(m, params, samples),
                                   tau_grid(taus, flow->count("--tmax") ? tmax : 4.0, flow->count("--dt") ? dt : 0.1));
      emit_table(c, "flow", [&](std::ostream& os) { io::write_flow_csv(os, rows); });
    } else if (sub == curves) {
      std::vector<io::Polyline> lines;
      const double reach = curves->count("--tmax") ? tmax : 5.0;
      if (m.is_circle()) {
        for (auto br : {CircleBranch::Upper, CircleBranch::Lower}) {
          const auto sc_curve = switching_curve_circle(params, br);
          lines.emplace_back(sc_curve.id(), sc_curve.sample(samples, reach));
        }
      } else {
        for (auto br : {SquareBranch::A, SquareBranch::C}) {
          const auto sc_curve = switching_curve_square(br, params);
          lines.emplace_back(sc_curve.id(), sc_curve.sample(samples, reach));
        }
      }
      emit_table(c, "switch_curves", [&](std::ostream& os) { io::write_curves_csv(os, lines); });
    } else if (sub == loci) {
      std::vector<io::Polyline> lines;
      if (touch_and_go) {
        for (const auto& tg : touch_and_go_curves(m, params, 200, extent)) lines.emplace_back(tg.id, tg.points);
      } else {
        LociOptions lo;
        lo.step = step;
        lo.half_width = extent;
        for (const auto& lc : discontinuity_loci(m, params, lo)) {
          std::vector<State> pts;
          for (const auto& p : lc.points) pts.push_back(p.x);
          lines.emplace_back(lc.id, std::move(pts));
        }
      }
      emit_table(c, "loci", [&](std::ostream& os) { io::write_curves_csv(os, lines); });
    } else if (sub == iso) {
      const std::vector<double> levels = taus.empty() ? std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8} : taus;
      std::vector<Isochrone> out;
      for (double t : levels) {
        if (m.is_circle() && params.alpha() == 1.0) {
          out.push_back(isochrone_circle(Params::make(1.0, m.radius()), t, samples));
        } else {
          out.push_back(isochrone_generic(m, params, t, samples));
        }
      }
      emit_table(c, "isochrone", [&](std::ostream& os) { io::write_isochrone_csv(os, out); });
    } else if (sub == fb) {
      emit_json(c, "feedback", to_json(m, feedback(m, params, {x1, x2})));
    } else if (sub == val) {
      std::cout << io::num(value(m, params, {x1, x2})) << '\n';
    } else if (sub == sim) {
      const Trajectory tr = simulate(m, params, {x1, x2}, dt, tmax);
      emit_table(c, "trajectory", [&](std::ostream& os) { io::write_trajectory_csv(os, tr); });
      if (tr.termination != Termination::ReachedUP) std::cerr << "time limit reached before the target\n";
    } else if (sub == ver) {
      const auto states = symmetric_grid(grid, extent);
      const auto lc = discontinuity_loci(m, params);
      const double band = 0.025;
      const auto excluded = [&](State s) { return distance_to_loci(lc, s) <= band; };
      const auto rep = oracle_grid_report(
          m, params, states, [&](State s) { return value(m, params, s); }, excluded);
      std::size_t asym = 0;
      for (const State& s : states) {
        if (in_interior(m, s)) continue;
        const auto a = feedback(m, params, s), b = feedback(m, params, -s);
        if (std::abs(a.time_to_go - b.time_to_go) > 1e-12 || a.u != -b.u) ++asym;
      }
      const bool ok = rep.max_error <= 1e-3 && asym == 0;
      nlohmann::json j{{"target", sc.target},     {"alpha", params.alpha()},     {"l", sc.l},
                       {"grid", grid},            {"extent", extent},            {"band_half_width", band},
                       {"compared", rep.compared}, {"excluded", rep.excluded},  {"max_error", rep.max_error},
                       {"mean_error", rep.mean_error}, {"tolerance", 1e-3},      {"asymmetric_states", asym},
                       {"loci", loci_summary(lc)}, {"pass", ok}};
      emit_table(c, "verify", [&](std::ostream& os) { io::write_oracle_csv(os, rep); });
      if (c.out.empty()) {
        std::cerr << j.dump(2) << '\n';
      } else {
        emit_json(c, "verify_summary", j);
        std::cout << j.dump(2) << '\n';
      }
      if (!ok) return kExitVerify;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
