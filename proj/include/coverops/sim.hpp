#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coverops/coverage.hpp"
#include "coverops/graph.hpp"
#include "coverops/likelihood.hpp"
#include "coverops/planner.hpp"

namespace coverops {

/// Raised when a run violates one of the guarantees the update scheme is
/// supposed to maintain. Aborting beats producing a silently wrong trace.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  EnvironmentGraph graph;
  MissionParams params;
  std::vector<Vertex> generators;  // empty: drawn from the seed
  LikelihoodSchedule phi;
  std::string planner = "greedy-ergodic";
  double duration = 0.0;
  std::uint64_t seed = 0;
  LikelihoodMode mode = LikelihoodMode::instantaneous;
  std::vector<double> checkpoints;     // occupancy/TV sample times
  std::vector<double> snapshot_times;  // state snapshot export times

  std::vector<std::string> validate() const {
    std::vector<std::string> out;
    try {
      params.validate();
    } catch (const std::exception& e) {
      out.emplace_back(e.what());
    }
    if (!(duration > 0.0)) out.emplace_back("duration must be positive");
    if (!generators.empty()) {
      if (static_cast<int>(generators.size()) != params.agent_count()) {
        out.emplace_back("generator count must match agent count");
      }
      for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i] < 0 || generators[i] >= graph.vertex_count()) {
          out.emplace_back("generator out of range: " +
                           std::to_string(generators[i]));
        }
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
          if (generators[i] == generators[j]) {
            out.emplace_back(
                "generators must be pairwise distinct (initialization "
                "requires distinct region generators)");
          }
        }
      }
    }
    try {
      phi.validate(graph.vertex_count());
    } catch (const std::exception& e) {
      out.emplace_back(e.what());
    }
    try {
      make_planner(planner, 0);
    } catch (const std::exception& e) {
      out.emplace_back(e.what());
    }
    return out;
  }
};

struct Collision {
  int agent_a = -1;
  int agent_b = -1;
  Vertex vertex = -1;
  double time = 0.0;
};

struct SimEvent {
  enum class Kind { comm, arrival, likelihood_switch, convergence };
  double time = 0.0;
  Kind kind = Kind::comm;
  int agent = -1;  // -1 when not agent-specific
};

inline const char* to_string(SimEvent::Kind k) {
  switch (k) {
    case SimEvent::Kind::comm: return "comm";
    case SimEvent::Kind::arrival: return "arrival";
    case SimEvent::Kind::likelihood_switch: return "likelihood-switch";
    case SimEvent::Kind::convergence: return "convergence";
  }
  return "?";
}

struct CheckpointSample {
  double time = 0.0;
  std::vector<double> occupancy;  // normalized histogram
  double tv_distance = 0.0;       // against the active mass vector
};

struct SimTrace {
  std::vector<SimEvent> events;
  std::vector<std::pair<double, double>> cost_samples;  // (time, H)
  std::vector<double> occupancy;                        // per-vertex time
  std::vector<std::vector<std::pair<double, double>>> uncovered_intervals;
  std::vector<Collision> collisions;
  std::optional<double> convergence_time;
  std::vector<CheckpointSample> checkpoints;
  std::map<double, nlohmann::json> snapshots;
  std::vector<OccupancyRecord> records;
  std::vector<Vertex> generators_used;  // after random selection
  BaseStationState final_state;
};

namespace detail {

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  double u = (rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

inline bool schedule_feasible(double base, std::vector<double> deadlines,
                              double delta_lower) {
  std::sort(deadlines.begin(), deadlines.end());
  for (std::size_t k = 0; k < deadlines.size(); ++k) {
    if (base + (k + 1) * delta_lower > deadlines[k] + 1e-9) return false;
  }
  return true;
}

}  // namespace detail

/// Picks the next exchange: a time at least delta_lower past the previous
/// one that keeps every per-agent deadline reachable, and an agent drawn
/// uniformly among those whose service now leaves the rest feasible.
inline std::pair<int, double> schedule_next_comm(
    std::mt19937_64& rng, double last_global,
    const std::vector<double>& last_contact, double delta_lower,
    double delta_bar) {
  int m = static_cast<int>(last_contact.size());
  std::vector<double> deadlines(m);
  for (int i = 0; i < m; ++i) deadlines[i] = last_contact[i] + delta_bar;

  std::vector<double> sorted = deadlines;
  std::sort(sorted.begin(), sorted.end());
  double tmax = kInfiniteDistance;
  for (int k = 0; k < m; ++k) {
    tmax = std::min(tmax, sorted[k] - k * delta_lower);
  }
  double tlo = last_global + delta_lower;
  if (tmax < tlo - 1e-9) {
    throw SimulationError("communication schedule became infeasible");
  }
  double t = detail::uniform_real(rng, tlo, std::max(tlo, tmax));

  std::vector<int> eligible;
  for (int a = 0; a < m; ++a) {
    std::vector<double> next = deadlines;
    next[a] = t + delta_bar;
    if (detail::schedule_feasible(t, next, delta_lower)) eligible.push_back(a);
  }
  if (eligible.empty()) {
    throw SimulationError("no agent can be scheduled without missing a deadline");
  }
  int a = eligible[rng() % eligible.size()];
  return {a, t};
}

/// Flags every vertex simultaneously occupied by two agents (transit
/// endpoints included). Interval endpoints merely touching do not count.
inline std::vector<Collision> detect_collision(
    const std::vector<OccupancyRecord>& records) {
  std::vector<OccupancyRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(),
            [](const OccupancyRecord& a, const OccupancyRecord& b) {
              if (a.vertex != b.vertex) return a.vertex < b.vertex;
              return a.enter < b.enter;
            });
  std::vector<Collision> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j].vertex != sorted[i].vertex) break;
      if (sorted[j].enter >= sorted[i].exit - 1e-12) break;
      if (sorted[j].agent != sorted[i].agent) {
        out.push_back({std::min(sorted[i].agent, sorted[j].agent),
                       std::max(sorted[i].agent, sorted[j].agent),
                       sorted[i].vertex, sorted[j].enter});
      }
    }
  }
  return out;
}

namespace detail {

struct UncoveredTracker {
  std::vector<double> open_since;  // negative: currently covered
  std::vector<std::vector<std::pair<double, double>>> intervals;

  explicit UncoveredTracker(int n) : open_since(n, -1.0), intervals(n) {}

  void update(const std::vector<VertexSet>& active, double t) {
    int n = static_cast<int>(open_since.size());
    for (Vertex k = 0; k < n; ++k) {
      bool covered = false;
      for (const auto& a : active) {
        if (a.contains(k)) {
          covered = true;
          break;
        }
      }
      if (covered && open_since[k] >= 0.0) {
        if (t > open_since[k]) intervals[k].push_back({open_since[k], t});
        open_since[k] = -1.0;
      } else if (!covered && open_since[k] < 0.0) {
        open_since[k] = t;
      }
    }
  }

  void close(double t_end) {
    for (std::size_t k = 0; k < open_since.size(); ++k) {
      if (open_since[k] >= 0.0 && t_end > open_since[k]) {
        intervals[k].push_back({open_since[k], t_end});
        open_since[k] = -1.0;
      }
    }
  }
};

inline std::vector<Vertex> pick_generators(const EnvironmentGraph& g,
                                           const MissionParams& params,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  int m = params.agent_count();
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Vertex> gens;
    while (static_cast<int>(gens.size()) < m) {
      Vertex v = static_cast<Vertex>(rng() % g.vertex_count());
      if (std::find(gens.begin(), gens.end(), v) == gens.end()) {
        gens.push_back(v);
      }
    }
    try {
      init_state(g, params, gens);
      return gens;
    } catch (const std::runtime_error&) {
      continue;  // empty or disconnected cell, redraw
    }
  }
  throw SimulationError("could not find a valid initial generator set");
}

}  // namespace detail

/// Deterministic discrete-event run: exchanges, motion, likelihood switches.
/// Every persistent-state property is asserted at every event; a violation
/// aborts the run with a diagnostic.
inline SimTrace run(const SimConfig& config) {
  {
    auto diags = config.validate();
    if (!diags.empty()) {
      throw std::invalid_argument("invalid config: " + diags.front());
    }
  }
  const EnvironmentGraph& g = config.graph;
  const MissionParams& params = config.params;
  int m = params.agent_count();
  int n = g.vertex_count();
  bool static_phi = config.phi.segments.size() == 1;

  std::vector<Vertex> gens = config.generators.empty()
                                 ? detail::pick_generators(g, params, config.seed)
                                 : config.generators;
  auto [state, payloads] = init_state(g, params, gens);

  std::vector<AgentTimingView> views;
  std::vector<MotionState> motions;
  for (int i = 0; i < m; ++i) {
    views.push_back(payloads[i].view());
    MotionState ms;
    ms.current = gens[i];  // agents start at their generators
    ms.visit_counts.assign(n, 0);
    ms.visit_counts[gens[i]] = 1;
    motions.push_back(std::move(ms));
  }
  auto planner = make_planner(config.planner, config.seed);

  SimTrace trace;
  trace.generators_used = gens;
  trace.occupancy.assign(n, 0.0);
  trace.uncovered_intervals.resize(n);

  std::mt19937_64 rng(config.seed);
  detail::UncoveredTracker uncovered(n);
  auto active_sets = [&](double t) {
    std::vector<VertexSet> sets;
    sets.reserve(m);
    for (int i = 0; i < m; ++i) sets.push_back(active_region(views[i], t));
    return sets;
  };
  uncovered.update(active_sets(0.0), 0.0);

  trace.cost_samples.push_back(
      {0.0, coverage_cost(state, g, params, config.phi, 0.0)});

  // Convergence bookkeeping: the run has converged once the covering is a
  // partition and every agent has exchanged since the last (P, c) change.
  std::vector<char> clean_exchange(m, 0);
  bool converged_in_segment = false;

  auto check_retreat_path = [&](int agent, const MotionState& motion,
                                double t) {
    // Non-terminal retreat vertices outside the agent's own region must sit
    // in the claiming agent's prohibited region and in nobody else's
    // coverage region, so traversing them cannot cause a collision.
    if (motion.retreat_path.size() < 1) return;
    for (std::size_t p = 0; p + 1 < motion.retreat_path.size(); ++p) {
      Vertex v = motion.retreat_path[p];
      if (state.covering[agent].contains(v)) continue;
      int owner = state.identifier[v];
      AgentTimingView ov = state.agent_view(owner);
      if (!prohibited_region(ov, t).contains(v)) {
        throw SimulationError(
            "retreat path vertex not protected by the new owner's gate");
      }
      for (int j = 0; j < m; ++j) {
        if (j != owner && state.covering[j].contains(v)) {
          throw SimulationError(
              "retreat path vertex still inside another coverage region");
        }
      }
    }
  };

  auto next_gate_after = [&](double t) {
    double best = kInfiniteDistance;
    for (int i = 0; i < m; ++i) {
      double gate = views[i].omega + views[i].tau;
      if (gate > t) best = std::min(best, gate);
    }
    return best;
  };

  std::vector<double> checkpoints = config.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  std::size_t next_checkpoint = 0;
  std::vector<double> snapshot_times = config.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::size_t next_snapshot = 0;

  auto next_comm = schedule_next_comm(rng, 0.0, state.last_contact,
                                      params.delta_lower, params.delta_bar);

  double t_cur = 0.0;
  while (t_cur < config.duration) {
    double tn = std::min(next_comm.second, config.duration);
    tn = std::min(tn, next_switch_after(config.phi, t_cur));
    tn = std::min(tn, next_gate_after(t_cur));
    if (next_checkpoint < checkpoints.size()) {
      tn = std::min(tn, checkpoints[next_checkpoint]);
    }
    if (next_snapshot < snapshot_times.size()) {
      tn = std::min(tn, snapshot_times[next_snapshot]);
    }

    for (int i = 0; i < m; ++i) {
      advance_motion(motions[i], views[i], g, config.phi, *planner, i,
                     params.speeds[i], t_cur, tn, config.mode, trace.records,
                     trace.occupancy);
    }
    t_cur = tn;
    bool at_end = t_cur >= config.duration;
    bool regions_changed_now = false;
    if (!at_end) {

    // Likelihood switch first, so a same-instant exchange sees new masses.
    for (const auto& seg : config.phi.segments) {
      if (seg.start == t_cur) {
        trace.events.push_back(
            {t_cur, SimEvent::Kind::likelihood_switch, -1});
        trace.cost_samples.push_back(
            {t_cur, coverage_cost(state, g, params, config.phi, t_cur)});
        converged_in_segment = false;
        std::fill(clean_exchange.begin(), clean_exchange.end(), 0);
        break;
      }
    }

    if (next_comm.second == t_cur) {
      int i = next_comm.first;
      VertexSet old_region = state.covering[i];
      Vertex old_generator = state.generators[i];
      double h_before = trace.cost_samples.back().second;
      bool shortcut_branch = state.timer(i, t_cur) > 0.0 &&
                             state.id_region(i) == state.covering[i];
      bool others_unblocked = true;
      for (int j = 0; j < m; ++j) {
        if (j != i && state.timer(j, t_cur) > 0.0) others_unblocked = false;
      }

      AgentPayload payload = base_update(state, g, params, config.phi, i, t_cur);

      auto violations = check_state_invariants(state, g, t_cur);
      if (!violations.empty()) {
        throw SimulationError("state invariant violated at t=" +
                              std::to_string(t_cur) + ": " + violations.front());
      }
      // The identifier partition must price identically to the covering.
      std::vector<VertexSet> id_cover;
      for (int j = 0; j < m; ++j) id_cover.push_back(state.id_region(j));
      double h_id = coverage_cost(id_cover, state.generators, params.speeds, g,
                                  masses_at(config.phi, t_cur));
      double h_now = coverage_cost(state, g, params, config.phi, t_cur);
      if (std::abs(h_id - h_now) > 1e-9) {
        throw SimulationError("identifier partition cost deviates at t=" +
                              std::to_string(t_cur));
      }
      if (h_now > h_before + 1e-9) {
        throw SimulationError("coverage cost increased within a segment at t=" +
                              std::to_string(t_cur));
      }
      trace.cost_samples.push_back({t_cur, h_now});
      trace.events.push_back({t_cur, SimEvent::Kind::comm, i});

      on_communication(motions[i], g, old_region, payload);
      views[i] = payload.view();
      if (motions[i].mode == MotionMode::retreat) {
        check_retreat_path(i, motions[i], t_cur);
      }

      bool changed = !(state.covering[i] == old_region) ||
                     state.generators[i] != old_generator;
      if (changed) {
        std::fill(clean_exchange.begin(), clean_exchange.end(), 0);
        converged_in_segment = false;
      } else if (!shortcut_branch && others_unblocked) {
        // Only an unblocked full candidate scan certifies that this agent
        // truly has no profitable move.
        clean_exchange[i] = 1;
      }
      if (!converged_in_segment &&
          std::all_of(clean_exchange.begin(), clean_exchange.end(),
                      [](char c) { return c != 0; })) {
        bool partition = true;
        for (int j = 0; j < m && partition; ++j) {
          partition = state.covering[j] == state.id_region(j);
        }
        if (partition) {
          converged_in_segment = true;
          if (!trace.convergence_time) trace.convergence_time = t_cur;
          trace.events.push_back({t_cur, SimEvent::Kind::convergence, -1});
          auto pareto = pareto_local_certificate(state, g, params,
                                                 masses_at(config.phi, t_cur));
          if (!pareto.optimal) {
            throw SimulationError("converged configuration fails the local "
                                  "optimality certificate: " +
                                  pareto.witness);
          }
        }
      }
      regions_changed_now = true;
      next_comm = schedule_next_comm(rng, t_cur, state.last_contact,
                                     params.delta_lower, params.delta_bar);
    }

    if (regions_changed_now || next_gate_after(t_cur - 1e-12) <= t_cur) {
      uncovered.update(active_sets(t_cur), t_cur);
    }
    }  // !at_end

    if (next_checkpoint < checkpoints.size() &&
        checkpoints[next_checkpoint] == t_cur) {
      ++next_checkpoint;
      CheckpointSample cs;
      cs.time = t_cur;
      cs.occupancy = trace.occupancy;
      // Fold in the open dwell/transit time so the histogram covers [0, t].
      for (int i = 0; i < m; ++i) {
        const MotionState& ms = motions[i];
        if (ms.transit) {
          double half = (t_cur - ms.transit->depart) / 2.0;
          cs.occupancy[ms.transit->from] += half;
          cs.occupancy[ms.transit->to] += half;
        } else {
          cs.occupancy[ms.current] += t_cur - ms.dwell_start;
        }
      }
      double total = 0.0;
      for (double v : cs.occupancy) total += v;
      if (total > 0.0) {
        for (double& v : cs.occupancy) v /= total;
      }
      const auto& masses = masses_at(config.phi, t_cur);
      double tv = 0.0;
      for (Vertex k = 0; k < n; ++k) {
        tv += std::abs(cs.occupancy[k] - masses[k]);
      }
      cs.tv_distance = tv / 2.0;
      trace.checkpoints.push_back(std::move(cs));
    }
    if (next_snapshot < snapshot_times.size() &&
        snapshot_times[next_snapshot] == t_cur) {
      ++next_snapshot;
      trace.snapshots[t_cur] = state.snapshot();
    }
  }

  for (int i = 0; i < m; ++i) {
    finalize_motion(motions[i], i, config.duration, trace.records,
                    trace.occupancy);
  }
  uncovered.close(config.duration);
  trace.uncovered_intervals = std::move(uncovered.intervals);
  trace.collisions = detect_collision(trace.records);
  trace.final_state = std::move(state);
  // Arrival events are implicit in the occupancy records; surface the comm
  // and structural events only.
  return trace;
}

struct Metrics {
  double max_uncovered = 0.0;
  std::vector<double> max_uncovered_per_vertex;
  bool cost_non_increasing = true;
  std::vector<CheckpointSample> checkpoints;
  std::size_t collision_count = 0;
  std::optional<double> convergence_time;
};

inline Metrics compute_metrics(const SimTrace& trace,
                               const LikelihoodSchedule& phi) {
  Metrics mtr;
  mtr.max_uncovered_per_vertex.assign(trace.uncovered_intervals.size(), 0.0);
  for (std::size_t k = 0; k < trace.uncovered_intervals.size(); ++k) {
    for (const auto& [a, b] : trace.uncovered_intervals[k]) {
      mtr.max_uncovered_per_vertex[k] =
          std::max(mtr.max_uncovered_per_vertex[k], b - a);
    }
    mtr.max_uncovered = std::max(mtr.max_uncovered,
                                 mtr.max_uncovered_per_vertex[k]);
  }
  double prev = -kInfiniteDistance;
  double segment_start = 0.0;
  for (const auto& [t, h] : trace.cost_samples) {
    bool new_segment = false;
    for (const auto& seg : phi.segments) {
      if (seg.start == t && seg.start > segment_start) {
        new_segment = true;
        segment_start = seg.start;
      }
    }
    if (!new_segment && h > prev + 1e-9 && prev != -kInfiniteDistance) {
      mtr.cost_non_increasing = false;
    }
    prev = h;
  }
  mtr.checkpoints = trace.checkpoints;
  mtr.collision_count = trace.collisions.size();
  mtr.convergence_time = trace.convergence_time;
  return mtr;
}

}  // namespace coverops
