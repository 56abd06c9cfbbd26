#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coverops/coverage.hpp"
#include "coverops/graph.hpp"
#include "coverops/likelihood.hpp"

namespace coverops {

struct Transit {
  Vertex from = -1;
  Vertex to = -1;
  double depart = 0.0;
  double arrive = 0.0;
};

enum class MotionMode { normal, retreat };

struct MotionState {
  Vertex current = -1;
  std::optional<Transit> transit;
  MotionMode mode = MotionMode::normal;
  std::vector<Vertex> retreat_path;  // remaining vertices to visit, in order
  std::vector<long> visit_counts;
  double vertex_enter_time = 0.0;  // conservative occupancy of `current`
                                   // started here (departure of the edge in)
  double dwell_start = 0.0;        // physical arrival at `current`
};

/// One conservative occupancy interval: the agent counts as present at
/// `vertex` for the whole of [enter, exit]. While traversing an edge the
/// agent occupies both endpoints.
struct OccupancyRecord {
  int agent = -1;
  Vertex vertex = -1;
  double enter = 0.0;
  double exit = 0.0;
};

/// Planner contract: the returned vertex must be adjacent to the current
/// one, inside the agent's region, and outside its prohibited region at
/// decision time. nullopt means stay.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::optional<Vertex> next_move(const AgentTimingView& view,
                                          const MotionState& motion,
                                          const LikelihoodSchedule& phi,
                                          const EnvironmentGraph& g, double t,
                                          LikelihoodMode mode) = 0;
};

/// Reference planner: greedy on local likelihood discounted by visit count.
/// Biases occupancy toward the likelihood while still sweeping the region.
class GreedyErgodicPlanner : public Planner {
 public:
  std::optional<Vertex> next_move(const AgentTimingView& view,
                                  const MotionState& motion,
                                  const LikelihoodSchedule& phi,
                                  const EnvironmentGraph& g, double t,
                                  LikelihoodMode mode) override {
    VertexSet admissible = active_region(view, t);
    std::optional<Vertex> best;
    double best_score = -1.0;
    for (auto [v, w] : g.neighbors(motion.current)) {
      if (!admissible.contains(v)) continue;
      double score =
          local_mass(view, phi, v, t, mode) / (1.0 + motion.visit_counts[v]);
      if (score > best_score) {  // ties keep the lower id (ascending order)
        best_score = score;
        best = v;
      }
    }
    return best;
  }
};

/// Uniformly random admissible neighbor, or stay when there is none.
class RandomAdmissiblePlanner : public Planner {
 public:
  explicit RandomAdmissiblePlanner(std::uint64_t seed) : rng_(seed) {}

  std::optional<Vertex> next_move(const AgentTimingView& view,
                                  const MotionState& motion,
                                  const LikelihoodSchedule& phi,
                                  const EnvironmentGraph& g, double t,
                                  LikelihoodMode mode) override {
    (void)phi;
    (void)mode;
    VertexSet admissible = active_region(view, t);
    std::vector<Vertex> options;
    for (auto [v, w] : g.neighbors(motion.current)) {
      if (admissible.contains(v)) options.push_back(v);
    }
    if (options.empty()) return std::nullopt;
    return options[rng_() % options.size()];
  }

 private:
  std::mt19937_64 rng_;
};

inline std::unique_ptr<Planner> make_planner(const std::string& name,
                                             std::uint64_t seed) {
  if (name == "greedy-ergodic") return std::make_unique<GreedyErgodicPlanner>();
  if (name == "random-admissible") {
    return std::make_unique<RandomAdmissiblePlanner>(seed);
  }
  throw std::invalid_argument("unknown planner: " + name);
}

/// Applies a fresh payload to the agent's motion state. When the agent's
/// position was reassigned away, a minimum-length retreat path through the
/// old region into the new one is installed and followed exclusively. A
/// mid-edge agent finishes the edge first, so its position for this purpose
/// is the transit target.
inline void on_communication(MotionState& motion, const EnvironmentGraph& g,
                             const VertexSet& old_region,
                             const AgentPayload& payload) {
  Vertex pos = motion.transit ? motion.transit->to : motion.current;
  if (payload.region.contains(pos)) {
    motion.mode = MotionMode::normal;
    motion.retreat_path.clear();
    return;
  }
  VertexSet goals = payload.region.intersect(old_region);
  if (goals.empty()) {
    throw std::runtime_error(
        "on_communication: no retreat target inside the old region");
  }
  if (motion.mode == MotionMode::retreat && !motion.retreat_path.empty()) {
    // Reassigned again mid-retreat: the current position may already lie
    // outside the region that was just replaced. Keep following the
    // installed path; stop at its first vertex inside the new region, or
    // extend it from its endpoint (which is inside the old region).
    for (std::size_t p = 0; p < motion.retreat_path.size(); ++p) {
      if (payload.region.contains(motion.retreat_path[p])) {
        motion.retreat_path.resize(p + 1);
        return;
      }
    }
    Vertex junction = motion.retreat_path.back();
    auto tail = shortest_path_in_subset(g, old_region, junction, goals);
    motion.retreat_path.insert(motion.retreat_path.end(), tail.begin() + 1,
                               tail.end());
    return;
  }
  auto path = shortest_path_in_subset(g, old_region, pos, goals);
  motion.mode = MotionMode::retreat;
  motion.retreat_path.assign(path.begin() + 1, path.end());
}

/// Advances the agent from `now` until `horizon`, emitting one conservative
/// occupancy record per completed vertex stay and accumulating half-split
/// edge time into `histogram`. Decisions happen on vertex arrival and when
/// the prohibited-region gate opens; in retreat mode the installed path is
/// consumed with no planner calls. `(now, horizon)` must not contain a
/// communication event.
inline void advance_motion(MotionState& motion, const AgentTimingView& view,
                           const EnvironmentGraph& g,
                           const LikelihoodSchedule& phi, Planner& planner,
                           int agent, double speed, double now, double horizon,
                           LikelihoodMode mode,
                           std::vector<OccupancyRecord>& records,
                           std::vector<double>& histogram) {
  auto begin_transit = [&](Vertex next, double t) {
    double w = kInfiniteDistance;
    for (auto [v, ew] : g.neighbors(motion.current)) {
      if (v == next) {
        w = ew;
        break;
      }
    }
    if (std::isinf(w)) {
      throw std::runtime_error("planner contract violation: target not adjacent");
    }
    histogram[motion.current] += t - motion.dwell_start;
    motion.transit = Transit{motion.current, next, t, t + w / speed};
  };

  while (true) {
    if (motion.transit) {
      if (motion.transit->arrive > horizon) return;
      const Transit tr = *motion.transit;
      // The stay at `from` conservatively extends over the traversal.
      records.push_back({agent, tr.from, motion.vertex_enter_time, tr.arrive});
      double half = (tr.arrive - tr.depart) / 2.0;
      histogram[tr.from] += half;
      histogram[tr.to] += half;
      motion.current = tr.to;
      motion.vertex_enter_time = tr.depart;  // occupied `to` since departure
      motion.dwell_start = tr.arrive;
      motion.transit.reset();
      ++motion.visit_counts[tr.to];
      if (motion.mode == MotionMode::retreat) {
        if (!motion.retreat_path.empty() &&
            motion.retreat_path.front() == tr.to) {
          motion.retreat_path.erase(motion.retreat_path.begin());
        }
        if (motion.retreat_path.empty()) motion.mode = MotionMode::normal;
      }
      now = tr.arrive;
      continue;
    }
    if (now >= horizon) return;
    if (motion.mode == MotionMode::retreat) {
      begin_transit(motion.retreat_path.front(), now);
      continue;
    }
    std::optional<Vertex> next =
        planner.next_move(view, motion, phi, g, now, mode);
    if (next) {
      if (!view.region.contains(*next) ||
          prohibited_region(view, now).contains(*next)) {
        throw std::runtime_error(
            "planner contract violation: target outside the admissible set");
      }
      begin_transit(*next, now);
      continue;
    }
    // Staying put. Wake up when the gate opens, in case new vertices
    // become admissible before the horizon.
    double gate = view.omega + view.tau;
    if (gate > now && gate < horizon) {
      now = gate;
      continue;
    }
    return;
  }
}

/// Closes the open occupancy interval(s) at end-of-run time `t_end`.
inline void finalize_motion(const MotionState& motion, int agent, double t_end,
                            std::vector<OccupancyRecord>& records,
                            std::vector<double>& histogram) {
  if (motion.transit) {
    const Transit& tr = *motion.transit;
    records.push_back({agent, tr.from, motion.vertex_enter_time, t_end});
    records.push_back({agent, tr.to, tr.depart, t_end});
    // The dwell before departure was booked when the transit began; only
    // the partial edge remains.
    double half = (t_end - tr.depart) / 2.0;
    histogram[tr.from] += half;
    histogram[tr.to] += half;
  } else {
    records.push_back({agent, motion.current, motion.vertex_enter_time, t_end});
    histogram[motion.current] += t_end - motion.dwell_start;
  }
}

}  // namespace coverops
