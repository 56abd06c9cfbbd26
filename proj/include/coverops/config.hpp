#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coverops/sim.hpp"

namespace coverops {

/// Builds a SimConfig from the single-document JSON format:
///
/// {
///   "graph": {"grid": {"rows": R, "cols": C, "cell_size": S,
///                      "weight_mode": "unit"|"cell_size"}}
///          | {"vertex_count": N, "edges": [[u,v,w], ...]},
///   "mission": {"speeds": [...], "delta_bar": .., "delta_lower": ..,
///               "delta_h": ..},
///   "generators": [v0, v1, ...]        // optional; drawn from seed if absent
///   "likelihood": {"type": "uniform"}
///              | {"type": "gaussian", "center": [x, y], "sigma": s}
///              | {"type": "schedule", "segments": [
///                    {"t": 0, "masses": [...]} |
///                    {"t": .., "gaussian": {"center": [x,y], "sigma": s}},
///                    ...]},
///   "planner": "greedy-ergodic" | "random-admissible",
///   "duration": T, "seed": S,
///   "likelihood_mode": "instantaneous" | "frozen",
///   "checkpoints": [...], "snapshot_times": [...]
/// }
inline SimConfig parse_config(const nlohmann::json& j) {
  const auto& jg = j.at("graph");
  EnvironmentGraph graph = [&] {
    if (jg.contains("grid")) {
      const auto& gr = jg["grid"];
      WeightMode mode = WeightMode::unit;
      if (gr.value("weight_mode", "unit") == std::string("cell_size")) {
        mode = WeightMode::cell_size;
      }
      return build_grid(gr.at("rows").get<int>(), gr.at("cols").get<int>(),
                        gr.value("cell_size", 1.0), mode);
    }
    return EnvironmentGraph::from_json(jg);
  }();

  const auto& jm = j.at("mission");
  MissionParams params;
  params.speeds = jm.at("speeds").get<std::vector<double>>();
  params.delta_bar = jm.at("delta_bar").get<double>();
  params.delta_lower = jm.at("delta_lower").get<double>();
  params.delta_h = jm.at("delta_h").get<double>();

  auto gaussian_from = [&](const nlohmann::json& spec) {
    auto center = spec.at("center").get<std::vector<double>>();
    return gaussian_masses(graph, center.at(0), center.at(1),
                           spec.at("sigma").get<double>());
  };

  const auto& jl = j.at("likelihood");
  LikelihoodSchedule phi;
  std::string type = jl.at("type").get<std::string>();
  if (type == "uniform") {
    phi = LikelihoodSchedule::uniform(graph.vertex_count());
  } else if (type == "gaussian") {
    phi = LikelihoodSchedule::single(gaussian_from(jl));
  } else if (type == "schedule") {
    for (const auto& seg : jl.at("segments")) {
      double t = seg.at("t").get<double>();
      if (seg.contains("masses")) {
        phi.segments.push_back({t, seg["masses"].get<std::vector<double>>()});
      } else {
        phi.segments.push_back({t, gaussian_from(seg.at("gaussian"))});
      }
    }
  } else {
    throw std::invalid_argument("unknown likelihood type: " + type);
  }

  SimConfig config{std::move(graph), std::move(params)};
  config.phi = std::move(phi);
  if (j.contains("generators") && !j["generators"].is_null()) {
    config.generators = j["generators"].get<std::vector<Vertex>>();
  }
  config.planner = j.value("planner", std::string("greedy-ergodic"));
  config.duration = j.at("duration").get<double>();
  config.seed = j.value("seed", std::uint64_t{0});
  config.mode = j.value("likelihood_mode", std::string("instantaneous")) ==
                        std::string("frozen")
                    ? LikelihoodMode::frozen
                    : LikelihoodMode::instantaneous;
  if (j.contains("checkpoints")) {
    config.checkpoints = j["checkpoints"].get<std::vector<double>>();
  }
  if (j.contains("snapshot_times")) {
    config.snapshot_times = j["snapshot_times"].get<std::vector<double>>();
  }
  return config;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

namespace io {

/// Shortest round-trippable decimal form, so reruns are byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  if (v == static_cast<double>(static_cast<long long>(v)) &&
      std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back;
  std::sscanf(buf, "%lf", &back);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

inline std::string cost_csv(const SimTrace& trace) {
  std::string out = "# cost v1\ntime,H\n";
  for (const auto& [t, h] : trace.cost_samples) {
    out += format_double(t) + "," + format_double(h) + "\n";
  }
  return out;
}

inline std::string uncovered_csv(const SimTrace& trace) {
  std::string out = "# uncovered v1\nvertex,max_gap\n";
  for (std::size_t k = 0; k < trace.uncovered_intervals.size(); ++k) {
    double max_gap = 0.0;
    for (const auto& [a, b] : trace.uncovered_intervals[k]) {
      max_gap = std::max(max_gap, b - a);
    }
    out += std::to_string(k) + "," + format_double(max_gap) + "\n";
  }
  return out;
}

inline std::string occupancy_csv(const SimTrace& trace, double duration,
                                 int agent_count) {
  std::string out = "# occupancy v1\nvertex,fraction\n";
  double total = duration * agent_count;
  for (std::size_t k = 0; k < trace.occupancy.size(); ++k) {
    out += std::to_string(k) + "," +
           format_double(trace.occupancy[k] / total) + "\n";
  }
  return out;
}

inline std::string events_csv(const SimTrace& trace) {
  std::string out = "# events v1\ntime,kind,agent\n";
  for (const auto& e : trace.events) {
    out += format_double(e.time) + "," + to_string(e.kind) + "," +
           std::to_string(e.agent) + "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace io
}  // namespace coverops
