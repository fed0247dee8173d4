#ifndef MINTIME_SCENARIO_HPP
#define MINTIME_SCENARIO_HPP

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "mintime/manifold.hpp"
#include "mintime/model.hpp"
#include "mintime/synthesis.hpp"

namespace mintime {

/// Malformed scenario input (unknown key, wrong type, unreadable file).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string target = "circle";
  double alpha = 1.0;
  double l = 1.0;

  Manifold manifold() const {
    if (target == "circle") return Manifold::circle(l);
    if (target == "square") return Manifold::square();
    throw DomainError("unknown target '" + target + "'");
  }
  /// The square is the unit box; l is only carried along.
  Params params() const { return Params::make(alpha, l); }
};

inline Scenario parse_scenario(const nlohmann::json& j, Scenario base = {}) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "alpha" || key == "l") {
      if (!v.is_number()) throw ScenarioError("scenario key '" + key + "' must be a number");
      (key == "alpha" ? base.alpha : base.l) = v.get<double>();
    } else if (key == "target") {
      if (!v.is_string()) throw ScenarioError("scenario key 'target' must be a string");
      base.target = v.get<std::string>();
      if (base.target != "circle" && base.target != "square") {
        throw ScenarioError("target must be \"circle\" or \"square\"");
      }
    } else {
      throw ScenarioError("unknown scenario key '" + key + "'");
    }
  }
  return base;
}

inline Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario_text(text);
}

inline nlohmann::json to_json(const Manifold& m, const BoundaryPoint& b) {
  const State x = boundary_state(m, b);
  return {{"kind", boundary_kind(b)}, {"param", boundary_param(b)}, {"x1", x.x1}, {"x2", x.x2}};
}

inline nlohmann::json to_json(const Manifold& m, const SynthesisResult& r) {
  nlohmann::json j;
  j["u"] = r.u;
  j["value"] = r.time_to_go;
  j["terminal"] = to_json(m, r.terminal_point);
  if (r.switch_state) {
    j["switch"] = {{"x1", r.switch_state->x1}, {"x2", r.switch_state->x2}};
  } else {
    j["switch"] = nullptr;
  }
  j["discontinuity_flag"] = r.discontinuity_flag;
  j["family"] = to_string(r.family);
  return j;
}

}  // namespace mintime

#endif  // MINTIME_SCENARIO_HPP
