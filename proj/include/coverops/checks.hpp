#pragma once

#include <random>
#include <string>
#include <vector>

#include "coverops/config.hpp"
#include "coverops/coverage.hpp"
#include "coverops/sim.hpp"

namespace coverops {

struct SuiteReport {
  std::string name;
  int total = 0;
  int failures = 0;
  std::vector<std::string> messages;

  bool passed() const { return failures == 0; }

  void fail(std::string msg) {
    ++failures;
    if (messages.size() < 20) messages.push_back(std::move(msg));
  }
};

namespace testgen {

/// Random connected graph with integer-valued weights, so distance sums
/// and speed-scaled comparisons are exact in floating point.
inline EnvironmentGraph random_connected_graph(std::mt19937_64& rng, int n,
                                               double extra_edge_prob = 0.3) {
  std::vector<Edge> edges;
  auto weight = [&] { return static_cast<double>(1 + rng() % 3); };
  for (Vertex v = 1; v < n; ++v) {
    Vertex u = static_cast<Vertex>(rng() % v);
    edges.push_back({u, v, weight()});
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      bool present = false;
      for (const Edge& e : edges) {
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) {
          present = true;
          break;
        }
      }
      if (!present && (rng() % 1000) < extra_edge_prob * 1000) {
        edges.push_back({u, v, weight()});
      }
    }
  }
  return EnvironmentGraph(n, std::move(edges));
}

/// Connected m-partition grown by multi-source flooding from random seeds.
inline std::vector<VertexSet> random_connected_partition(std::mt19937_64& rng,
                                                         const EnvironmentGraph& g,
                                                         int m) {
  int n = g.vertex_count();
  while (true) {
    std::vector<int> owner(n, -1);
    std::vector<Vertex> frontier;
    std::vector<Vertex> seeds;
    for (int i = 0; i < m; ++i) {
      Vertex s;
      do {
        s = static_cast<Vertex>(rng() % n);
      } while (owner[s] != -1);
      owner[s] = i;
      seeds.push_back(s);
      frontier.push_back(s);
    }
    while (!frontier.empty()) {
      std::size_t idx = rng() % frontier.size();
      Vertex u = frontier[idx];
      std::vector<Vertex> unclaimed;
      for (auto [v, w] : g.neighbors(u)) {
        if (owner[v] == -1) unclaimed.push_back(v);
      }
      if (unclaimed.empty()) {
        frontier.erase(frontier.begin() + idx);
        continue;
      }
      Vertex v = unclaimed[rng() % unclaimed.size()];
      owner[v] = owner[u];
      frontier.push_back(v);
    }
    std::vector<VertexSet> parts(m, VertexSet(n));
    for (Vertex k = 0; k < n; ++k) parts[owner[k]].insert(k);
    bool ok = true;
    for (int i = 0; i < m; ++i) ok = ok && !parts[i].empty();
    if (ok) return parts;
  }
}

struct OracleInstance {
  EnvironmentGraph graph;
  MissionParams params;
  BaseStationState state;
  int agent = 0;
  Vertex candidate = 0;
  double time = 0.0;
};

/// Random instance satisfying the additive-subset precondition: the probed
/// agent's identifier region stays disjoint from every other coverage
/// region; other regions may overlap each other.
inline OracleInstance random_oracle_instance(std::mt19937_64& rng) {
  int n = 4 + static_cast<int>(rng() % 7);  // 4..10 vertices
  int m = 2 + static_cast<int>(rng() % 2);  // 2..3 agents
  if (m >= n) m = 2;
  EnvironmentGraph g = random_connected_graph(rng, n);

  MissionParams params;
  const double speed_choices[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < m; ++i) {
    params.speeds.push_back(speed_choices[rng() % 3]);
  }
  params.delta_bar = 8.0 * m;
  params.delta_lower = 1.0;
  params.delta_h = 2.0;

  auto parts = random_connected_partition(rng, g, m);
  int agent = static_cast<int>(rng() % m);

  BaseStationState state;
  state.covering = parts;
  state.identifier.assign(n, -1);
  for (int i = 0; i < m; ++i) {
    for (Vertex k : parts[i].to_vector()) state.identifier[k] = i;
  }
  // Let the other regions spill into each other (never into the probed
  // agent's identifier region).
  for (int j = 0; j < m; ++j) {
    if (j == agent || (rng() % 2) == 0) continue;
    for (int grow = 0; grow < 2; ++grow) {
      std::vector<Vertex> adjacent;
      for (Vertex k = 0; k < n; ++k) {
        if (state.covering[j].contains(k) || state.identifier[k] == agent ||
            state.identifier[k] == j) {
          continue;
        }
        for (auto [v, w] : g.neighbors(k)) {
          if (state.covering[j].contains(v)) {
            adjacent.push_back(k);
            break;
          }
        }
      }
      if (adjacent.empty()) break;
      state.covering[j].insert(adjacent[rng() % adjacent.size()]);
    }
  }
  for (int i = 0; i < m; ++i) {
    auto members = state.covering[i].to_vector();
    state.generators.push_back(members[rng() % members.size()]);
  }
  double t = 10.0;
  for (int i = 0; i < m; ++i) {
    state.timer_expiry.push_back((rng() % 2) ? t + 1.0 + (rng() % 5) : 0.0);
    state.last_contact.push_back(0.0);
    state.recently_added.emplace_back(n);
    state.agent_tau.push_back(0.0);
  }

  auto own = state.id_region(agent).to_vector();
  OracleInstance inst{std::move(g), std::move(params), std::move(state),
                      agent, own[rng() % own.size()], t};
  return inst;
}

}  // namespace testgen

/// Brute-force additive subset: enumerate every superset of the identifier
/// region, keep the ones satisfying the timer and strict-distance clauses
/// on a connected set, and return the maximum-cardinality one. Checks the
/// claimed uniqueness: every satisfying set must be contained in the
/// returned one.
inline VertexSet brute_force_additive_subset(const BaseStationState& state,
                                             const EnvironmentGraph& g,
                                             const MissionParams& params,
                                             int agent, Vertex candidate,
                                             double t) {
  int n = g.vertex_count();
  VertexSet id_region = state.id_region(agent);
  std::vector<Vertex> external;
  for (Vertex k = 0; k < n; ++k) {
    if (!id_region.contains(k)) external.push_back(k);
  }
  auto satisfies = [&](const VertexSet& s) {
    if (!is_connected(g, s)) return false;
    auto dist = distances_in_subset(g, s, candidate);
    for (Vertex h : s.to_vector()) {
      for (int j = 0; j < state.agent_count(); ++j) {
        if (j == agent || !state.covering[j].contains(h)) continue;
        if (state.timer(j, t) > 0.0) return false;
        double lhs = dist[h] / params.speeds[agent];
        double rhs = subgraph_distance(g, state.covering[j], h,
                                       state.generators[j]) /
                     params.speeds[j];
        if (!(lhs < rhs)) return false;
      }
    }
    return true;
  };

  std::vector<VertexSet> satisfying;
  std::uint64_t combos = std::uint64_t{1} << external.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    VertexSet s = id_region;
    for (std::size_t b = 0; b < external.size(); ++b) {
      if (mask & (std::uint64_t{1} << b)) s.insert(external[b]);
    }
    if (satisfies(s)) satisfying.push_back(s);
  }
  VertexSet best = id_region;
  for (const auto& s : satisfying) {
    if (s.size() > best.size()) best = s;
  }
  for (const auto& s : satisfying) {
    if (!s.is_subset_of(best)) {
      throw std::logic_error(
          "brute_force_additive_subset: maximal set is not unique");
    }
  }
  return best;
}

/// The baseline mission used by the randomized suites: four agents on a
/// 10x10 unit grid with a corner-weighted static likelihood.
inline SimConfig invariant_suite_config(std::uint64_t seed) {
  EnvironmentGraph g = build_grid(10, 10, 1.0, WeightMode::unit);
  MissionParams params{{1.0, 1.0, 1.0, 1.0}, 10.0, 1.0, 2.0};
  SimConfig config{g, params};
  config.phi = LikelihoodSchedule::single(gaussian_masses(g, 2.0, 2.0, 3.0));
  config.duration = 2000.0;
  config.seed = seed;
  return config;
}

/// Runs the full simulation (which asserts every state invariant at every
/// event) across `runs` seeds.
inline SuiteReport run_invariant_suite(int runs = 100,
                                       std::uint64_t seed_base = 1) {
  SuiteReport report{"invariants"};
  for (int r = 0; r < runs; ++r) {
    ++report.total;
    try {
      SimTrace trace = run(invariant_suite_config(seed_base + r));
      if (!trace.collisions.empty()) {
        report.fail("seed " + std::to_string(seed_base + r) + ": " +
                    std::to_string(trace.collisions.size()) + " collisions");
      }
    } catch (const std::exception& e) {
      report.fail("seed " + std::to_string(seed_base + r) + ": " + e.what());
    }
  }
  return report;
}

/// Constructive additive subsets against brute-force enumeration.
inline SuiteReport run_oracle_suite(int cases = 500,
                                    std::uint64_t seed = 12345) {
  SuiteReport report{"oracle"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    ++report.total;
    auto inst = testgen::random_oracle_instance(rng);
    try {
      VertexSet got = additive_subset(inst.state, inst.graph, inst.params,
                                      inst.agent, inst.candidate, inst.time);
      VertexSet want = brute_force_additive_subset(
          inst.state, inst.graph, inst.params, inst.agent, inst.candidate,
          inst.time);
      if (!(got == want)) {
        report.fail("case " + std::to_string(c) +
                    ": constructive and brute-force sets differ");
      }
    } catch (const std::exception& e) {
      report.fail("case " + std::to_string(c) + ": " + e.what());
    }
  }
  return report;
}

/// Tiny static instances run to convergence, then certified optimal by
/// exhaustive enumeration of generator tuples and coverings.
inline SuiteReport run_pareto_suite(int instances = 15,
                                    std::uint64_t seed = 7) {
  SuiteReport report{"pareto"};
  std::mt19937_64 rng(seed);
  for (int c = 0; c < instances; ++c) {
    ++report.total;
    int n = 6 + static_cast<int>(rng() % 3);  // 6..8 vertices
    EnvironmentGraph g = testgen::random_connected_graph(rng, n, 0.2);
    MissionParams params{{1.0, 1.0}, 4.0, 1.0, 1.0};
    std::vector<double> masses(n);
    double sum = 0.0;
    for (double& v : masses) {
      v = static_cast<double>(1 + rng() % 9);
      sum += v;
    }
    for (double& v : masses) v /= sum;

    SimConfig config{g, params};
    config.phi = LikelihoodSchedule::single(masses);
    config.duration = 400.0;
    config.seed = seed * 1000 + c;
    config.planner = "random-admissible";
    try {
      SimTrace trace = run(config);
      if (!trace.convergence_time) {
        report.fail("case " + std::to_string(c) + ": did not converge");
        continue;
      }
      auto res = pareto_exhaustive_certificate(trace.final_state, g, params,
                                               masses);
      if (!res.optimal) {
        report.fail("case " + std::to_string(c) + ": " + res.witness);
      }
    } catch (const std::exception& e) {
      report.fail("case " + std::to_string(c) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace coverops
