#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coverops/graph.hpp"
#include "coverops/likelihood.hpp"

namespace coverops {

struct MissionParams {
  std::vector<double> speeds;  // s_i, distance per time
  double delta_bar = 0.0;      // max per-agent inter-communication gap
  double delta_lower = 0.0;    // min global gap between any two exchanges
  double delta_h = 0.0;        // post-handoff holding time

  int agent_count() const { return static_cast<int>(speeds.size()); }

  void validate() const {
    if (speeds.empty()) throw std::invalid_argument("MissionParams: no agents");
    for (double s : speeds) {
      if (!(s > 0.0)) throw std::invalid_argument("MissionParams: speed <= 0");
    }
    if (!(delta_bar > 0.0) || !(delta_lower > 0.0) || !(delta_h > 0.0)) {
      throw std::invalid_argument("MissionParams: timing bounds must be positive");
    }
    if (delta_bar < agent_count() * delta_lower) {
      throw std::invalid_argument(
          "MissionParams: delta_bar must be at least agent_count * delta_lower "
          "for a feasible communication schedule");
    }
  }
};

/// Variables handed to the communicating agent at the end of an exchange.
struct AgentPayload {
  VertexSet region;          // P_i^A
  Vertex generator = -1;     // c_i^A
  VertexSet recently_added;  // P_i^{A,pd}
  double tau = 0.0;          // tau_i^A
  double omega = 0.0;        // omega_i^A

  AgentTimingView view() const {
    return AgentTimingView{region, recently_added, tau, omega};
  }
};

/// Global state held by the base station, plus its mirror of each agent's
/// timing variables (the base computed them at the agent's last exchange).
/// Timers are stored as absolute expiry times; T_i(t) is derived.
struct BaseStationState {
  std::vector<VertexSet> covering;   // P
  std::vector<Vertex> generators;    // c
  std::vector<int> identifier;       // ID_k, per vertex
  std::vector<double> timer_expiry;  // T_i(t) = max(0, expiry_i - t)
  std::vector<double> last_contact;  // omega_i

  std::vector<VertexSet> recently_added;  // P_i^{A,pd} mirror
  std::vector<double> agent_tau;          // tau_i^A mirror

  int agent_count() const { return static_cast<int>(covering.size()); }
  int vertex_count() const { return static_cast<int>(identifier.size()); }

  double timer(int i, double t) const {
    return std::max(0.0, timer_expiry[i] - t);
  }

  /// P_i^ID: the vertices whose identifier is i.
  VertexSet id_region(int i) const {
    VertexSet s(vertex_count());
    for (Vertex k = 0; k < vertex_count(); ++k) {
      if (identifier[k] == i) s.insert(k);
    }
    return s;
  }

  AgentTimingView agent_view(int i) const {
    return AgentTimingView{covering[i], recently_added[i], agent_tau[i],
                           last_contact[i]};
  }

  nlohmann::json snapshot() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto cov = nlohmann::json::array();
    for (const auto& p : covering) cov.push_back(p.to_vector());
    j["covering"] = cov;
    j["generators"] = generators;
    j["identifier"] = identifier;
    j["timer_expiry"] = timer_expiry;
    j["last_contact"] = last_contact;
    auto pd = nlohmann::json::array();
    for (const auto& p : recently_added) pd.push_back(p.to_vector());
    j["recently_added"] = pd;
    j["agent_tau"] = agent_tau;
    return j;
  }
};

/// Initial state: a speed-weighted Voronoi partition of Q by graph distance,
/// ties to the lowest agent index. Throws if any cell comes out empty or
/// disconnected (callers retry with different generators).
inline std::pair<BaseStationState, std::vector<AgentPayload>> init_state(
    const EnvironmentGraph& g, const MissionParams& params,
    const std::vector<Vertex>& generators) {
  params.validate();
  int m = params.agent_count();
  int n = g.vertex_count();
  if (static_cast<int>(generators.size()) != m) {
    throw std::invalid_argument("init_state: generator count != agent count");
  }
  for (int i = 0; i < m; ++i) {
    if (generators[i] < 0 || generators[i] >= n) {
      throw std::invalid_argument("init_state: generator out of range");
    }
    for (int j = i + 1; j < m; ++j) {
      if (generators[i] == generators[j]) {
        throw std::invalid_argument("init_state: generators must be distinct");
      }
    }
  }

  VertexSet all = VertexSet::full(n);
  std::vector<std::vector<double>> dist(m);
  for (int i = 0; i < m; ++i) {
    dist[i] = distances_in_subset(g, all, generators[i]);
  }

  BaseStationState state;
  state.covering.assign(m, VertexSet(n));
  state.generators = generators;
  state.identifier.assign(n, -1);
  state.timer_expiry.assign(m, 0.0);
  state.last_contact.assign(m, 0.0);
  state.recently_added.assign(m, VertexSet(n));
  state.agent_tau.assign(m, -params.delta_h);

  for (Vertex k = 0; k < n; ++k) {
    int best = -1;
    double best_cost = kInfiniteDistance;
    for (int i = 0; i < m; ++i) {
      double c = dist[i][k] / params.speeds[i];
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    if (best < 0) {
      throw std::runtime_error("init_state: graph is disconnected");
    }
    state.identifier[k] = best;
    state.covering[best].insert(k);
  }

  for (int i = 0; i < m; ++i) {
    if (state.covering[i].empty()) {
      throw std::runtime_error("init_state: empty Voronoi cell");
    }
    if (!is_connected(g, state.covering[i])) {
      throw std::runtime_error("init_state: disconnected Voronoi cell");
    }
  }

  std::vector<AgentPayload> payloads;
  payloads.reserve(m);
  for (int i = 0; i < m; ++i) {
    payloads.push_back(AgentPayload{state.covering[i], generators[i],
                                    VertexSet(n), -params.delta_h, 0.0});
  }
  return {std::move(state), std::move(payloads)};
}

namespace detail {

struct AdditiveGrowth {
  VertexSet set;
  std::vector<double> dist;  // d_S(., k) for members, infinity elsewhere
};

/// Constructive additive subset: best-first growth from the candidate
/// generator k. A vertex pops with its final within-set distance; it is
/// admitted when every owning region's timer is zero and the strict
/// distance condition holds, and permanently excluded otherwise (later
/// admissions only see larger pop distances, so no rejection can be
/// revisited). Requires the precondition that P_i^ID is connected and
/// disjoint from all other coverage regions.
inline AdditiveGrowth grow_additive_subset(
    const BaseStationState& state, const EnvironmentGraph& g,
    const MissionParams& params, int i, Vertex k, double t,
    const VertexSet& id_region_i,
    const std::vector<std::vector<double>>& dist_to_gen) {
  int n = g.vertex_count();
  AdditiveGrowth out{id_region_i, std::vector<double>(n, kInfiniteDistance)};
  std::vector<char> decided(n, 0);

  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  out.dist[k] = 0.0;
  heap.push({0.0, k});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (decided[u] || d > out.dist[u]) continue;
    if (!id_region_i.contains(u)) {
      bool admit = true;
      for (int j = 0; j < state.agent_count() && admit; ++j) {
        if (j == i || !state.covering[j].contains(u)) continue;
        if (state.timer(j, t) > 0.0) {
          admit = false;
        } else if (!(d / params.speeds[i] <
                     dist_to_gen[j][u] / params.speeds[j])) {
          admit = false;
        }
      }
      if (!admit) {
        out.dist[u] = kInfiniteDistance;
        decided[u] = 1;
        continue;
      }
      out.set.insert(u);
    }
    decided[u] = 1;
    for (auto [v, w] : g.neighbors(u)) {
      if (decided[v]) continue;
      double nd = d + w;
      if (nd < out.dist[v]) {
        out.dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return out;
}

inline void require_additive_precondition(const BaseStationState& state,
                                          const EnvironmentGraph& g, int i,
                                          const VertexSet& id_region_i) {
  if (!is_connected(g, id_region_i)) {
    throw std::logic_error("additive_subset: identifier region not connected");
  }
  for (int j = 0; j < state.agent_count(); ++j) {
    if (j != i && id_region_i.intersects(state.covering[j])) {
      throw std::logic_error(
          "additive_subset: identifier region overlaps another coverage region");
    }
  }
}

}  // namespace detail

/// Largest connected superset of P_i^ID claimable by agent i with candidate
/// generator k: every vertex taken from another region requires that
/// region's timer to read zero and the scaled within-set distance to beat
/// the incumbent's generator distance strictly.
inline VertexSet additive_subset(const BaseStationState& state,
                                 const EnvironmentGraph& g,
                                 const MissionParams& params, int i, Vertex k,
                                 double t) {
  VertexSet id_region_i = state.id_region(i);
  if (!id_region_i.contains(k)) {
    throw std::domain_error("additive_subset: candidate generator not in P_i^ID");
  }
  detail::require_additive_precondition(state, g, i, id_region_i);
  std::vector<std::vector<double>> dist_to_gen(state.agent_count());
  for (int j = 0; j < state.agent_count(); ++j) {
    if (j == i) continue;
    dist_to_gen[j] =
        distances_in_subset(g, state.covering[j], state.generators[j]);
  }
  return detail::grow_additive_subset(state, g, params, i, k, t, id_region_i,
                                      dist_to_gen)
      .set;
}

/// Coverage cost of an arbitrary covering/generator pair: for each vertex,
/// the best scaled within-region distance to a generator among the regions
/// containing it, weighted by the mass vector. Accumulated in ascending
/// vertex order so repeated evaluations are bit-stable. Returns infinity
/// when a positive-mass vertex is unreachable (an invariant-violation
/// signal; cannot happen for a connected covering).
inline double coverage_cost(const std::vector<VertexSet>& covering,
                            const std::vector<Vertex>& generators,
                            const std::vector<double>& speeds,
                            const EnvironmentGraph& g,
                            const std::vector<double>& masses) {
  int m = static_cast<int>(covering.size());
  std::vector<std::vector<double>> dist(m);
  for (int i = 0; i < m; ++i) {
    if (!covering[i].contains(generators[i])) {
      dist[i].assign(g.vertex_count(), kInfiniteDistance);
    } else {
      dist[i] = distances_in_subset(g, covering[i], generators[i]);
    }
  }
  double total = 0.0;
  for (Vertex k = 0; k < g.vertex_count(); ++k) {
    double best = kInfiniteDistance;
    for (int i = 0; i < m; ++i) {
      if (covering[i].contains(k)) {
        best = std::min(best, dist[i][k] / speeds[i]);
      }
    }
    if (masses[k] > 0.0) {
      if (std::isinf(best)) return kInfiniteDistance;
      total += best * masses[k];
    }
  }
  return total;
}

inline double coverage_cost(const BaseStationState& state,
                            const EnvironmentGraph& g,
                            const MissionParams& params,
                            const LikelihoodSchedule& phi, double t) {
  return coverage_cost(state.covering, state.generators, params.speeds, g,
                       masses_at(phi, t));
}

struct TimerUpdateResult {
  double tau_i;    // new tau for the communicating agent
  double delta_max;
};

/// Timer update applied after agent i's new region P* has been chosen:
/// buffers give the claimed-from agents time to vacate, force them to
/// check in by their deadline, and gate agent i off the claimed vertices
/// until then. Empty maxima evaluate to 0.
inline TimerUpdateResult timer_update(BaseStationState& state,
                                      const EnvironmentGraph& g,
                                      const MissionParams& params, int i,
                                      const VertexSet& p_star,
                                      const VertexSet& recently_added,
                                      double t0) {
  const VertexSet& p_i = state.covering[i];
  VertexSet retained_core = p_star.difference(recently_added);  // P_i^ID

  double delta_i = 0.0;
  VertexSet removed = p_i.difference(p_star);
  if (!removed.empty()) {
    auto d = distances_to_set(g, p_i, retained_core);
    for (Vertex k : removed.to_vector()) {
      delta_i = std::max(delta_i, d[k] / params.speeds[i]);
    }
  }

  double delta_max = 0.0;
  for (int j = 0; j < state.agent_count(); ++j) {
    if (j == i) continue;
    VertexSet claimed = state.covering[j].intersect(p_star);
    if (claimed.empty()) continue;
    double delta_j = 0.0;
    VertexSet keep = state.covering[j].difference(p_star);
    if (!keep.empty()) {
      auto d = distances_to_set(g, state.covering[j], keep);
      for (Vertex k : claimed.to_vector()) {
        delta_j = std::max(delta_j, d[k] / params.speeds[j]);
      }
    }
    state.timer_expiry[j] = state.last_contact[j] + params.delta_bar;
    delta_max = std::max(
        delta_max, state.last_contact[j] + params.delta_bar + delta_j - t0);
  }
  delta_max = std::max(delta_max, delta_i);

  state.timer_expiry[i] = t0 + delta_max + params.delta_h;
  state.agent_tau[i] = delta_max;
  state.last_contact[i] = t0;
  return {delta_max, delta_max};
}

/// One timed exchange between agent i and the base station at time t0.
/// Mutates the state in place and returns the payload for the agent.
inline AgentPayload base_update(BaseStationState& state,
                                const EnvironmentGraph& g,
                                const MissionParams& params,
                                const LikelihoodSchedule& phi, int i,
                                double t0) {
  int m = state.agent_count();
  if (i < 0 || i >= m) throw std::domain_error("base_update: bad agent index");
  const std::vector<double>& masses = masses_at(phi, t0);
  VertexSet id_region_i = state.id_region(i);

  if (state.timer(i, t0) > 0.0 && id_region_i == state.covering[i]) {
    // Timer still running and nothing was reassigned away: only the
    // agent-side gate shifts to the new contact time.
    state.agent_tau[i] = state.agent_tau[i] - t0 + state.last_contact[i];
    state.last_contact[i] = t0;
    return AgentPayload{state.covering[i], state.generators[i],
                        state.recently_added[i], state.agent_tau[i], t0};
  }

  detail::require_additive_precondition(state, g, i, id_region_i);
  std::vector<std::vector<double>> dist_to_gen(m);
  for (int j = 0; j < m; ++j) {
    if (j == i) continue;
    dist_to_gen[j] =
        distances_in_subset(g, state.covering[j], state.generators[j]);
  }
  // Best scaled distance offered to each vertex by the other agents'
  // (unchanged) regions. Shared by every candidate evaluation.
  std::vector<double> others_best(g.vertex_count(), kInfiniteDistance);
  for (Vertex k = 0; k < g.vertex_count(); ++k) {
    for (int j = 0; j < m; ++j) {
      if (j == i || !state.covering[j].contains(k)) continue;
      others_best[k] =
          std::min(others_best[k], dist_to_gen[j][k] / params.speeds[j]);
    }
  }
  auto eval = [&](const VertexSet& region_i,
                  const std::vector<double>& dist_i) {
    double total = 0.0;
    for (Vertex k = 0; k < g.vertex_count(); ++k) {
      double best = others_best[k];
      if (region_i.contains(k)) {
        best = std::min(best, dist_i[k] / params.speeds[i]);
      }
      if (masses[k] > 0.0) {
        if (std::isinf(best)) return kInfiniteDistance;
        total += best * masses[k];
      }
    }
    return total;
  };

  // Baseline candidate: the identifier region with the incumbent generator.
  VertexSet best_region = id_region_i;
  Vertex best_generator = state.generators[i];
  std::vector<double> best_dist =
      distances_in_subset(g, id_region_i, best_generator);
  double best_cost = eval(best_region, best_dist);

  for (Vertex k : id_region_i.to_vector()) {
    auto grown = detail::grow_additive_subset(state, g, params, i, k, t0,
                                              id_region_i, dist_to_gen);
    double cost = eval(grown.set, grown.dist);
    if (cost < best_cost) {
      best_region = std::move(grown.set);
      best_generator = k;
      best_dist = std::move(grown.dist);
      best_cost = cost;
    }
  }

  VertexSet added = best_region.difference(id_region_i);
  timer_update(state, g, params, i, best_region, added, t0);
  state.covering[i] = best_region;
  state.generators[i] = best_generator;
  state.recently_added[i] = added;
  for (Vertex k : best_region.to_vector()) {
    state.identifier[k] = i;
  }
  return AgentPayload{state.covering[i], state.generators[i],
                      state.recently_added[i], state.agent_tau[i], t0};
}

/// Checks every persistent set/timer property the update scheme is supposed
/// to maintain. Returns human-readable violation strings; empty means clean.
inline std::vector<std::string> check_state_invariants(
    const BaseStationState& state, const EnvironmentGraph& g, double t) {
  std::vector<std::string> out;
  int m = state.agent_count();
  int n = state.vertex_count();

  for (Vertex k = 0; k < n; ++k) {
    if (state.identifier[k] < 0 || state.identifier[k] >= m) {
      out.push_back("identifier out of range at vertex " + std::to_string(k));
    }
  }
  std::vector<VertexSet> id_regions;
  id_regions.reserve(m);
  for (int i = 0; i < m; ++i) id_regions.push_back(state.id_region(i));
  for (int i = 0; i < m; ++i) {
    const VertexSet& idr = id_regions[i];
    if (idr.empty()) {
      out.push_back("identifier region empty for agent " + std::to_string(i));
    } else if (!is_connected(g, idr)) {
      out.push_back("identifier region disconnected for agent " +
                    std::to_string(i));
    }
    if (state.covering[i].empty()) {
      out.push_back("coverage region empty for agent " + std::to_string(i));
    } else if (!is_connected(g, state.covering[i])) {
      out.push_back("coverage region disconnected for agent " +
                    std::to_string(i));
    }
    if (!state.covering[i].contains(state.generators[i])) {
      out.push_back("generator outside coverage region for agent " +
                    std::to_string(i));
    }
    for (int j = i + 1; j < m; ++j) {
      if (state.generators[i] == state.generators[j]) {
        out.push_back("generators coincide for agents " + std::to_string(i) +
                      " and " + std::to_string(j));
      }
    }
  }

  VertexSet covered(n);
  for (int i = 0; i < m; ++i) covered = covered.unite(state.covering[i]);
  if (covered.size() != n) {
    out.push_back("coverage regions do not cover the whole graph");
  }

  for (Vertex k = 0; k < n; ++k) {
    int owner = state.identifier[k];
    if (owner < 0 || owner >= m) continue;
    if (!state.covering[owner].contains(k)) {
      out.push_back("vertex " + std::to_string(k) +
                    " missing from its identifier's coverage region");
    }
    int members = 0;
    for (int i = 0; i < m; ++i) {
      if (state.covering[i].contains(k)) ++members;
    }
    if (members > 2) {
      out.push_back("vertex " + std::to_string(k) +
                    " belongs to more than two coverage regions");
    }
    if (state.timer(owner, t) == 0.0 && members > 1) {
      out.push_back("vertex " + std::to_string(k) +
                    " shared although its owner's timer reads zero");
    }
  }
  // A coverage region may reach into at most one other agent's identifier
  // region (the one it was just handing vertices to or taking them from).
  for (int j = 0; j < m; ++j) {
    int overlapped = 0;
    for (int l = 0; l < m; ++l) {
      if (l != j && state.covering[j].intersects(id_regions[l])) ++overlapped;
    }
    if (overlapped > 1) {
      out.push_back("region of agent " + std::to_string(j) +
                    " reaches into more than one other identifier region");
    }
  }

  // Active regions (the supports of the local likelihoods, up to zero-mass
  // vertices) must stay within the coverage regions and pairwise disjoint.
  std::vector<VertexSet> active;
  active.reserve(m);
  for (int i = 0; i < m; ++i) {
    active.push_back(active_region(state.agent_view(i), t));
  }
  for (int i = 0; i < m; ++i) {
    if (!active[i].is_subset_of(state.covering[i])) {
      out.push_back("active region escapes coverage region for agent " +
                    std::to_string(i));
    }
    for (int j = i + 1; j < m; ++j) {
      if (active[i].intersects(active[j])) {
        out.push_back("active regions overlap for agents " + std::to_string(i) +
                      " and " + std::to_string(j));
      }
    }
  }
  return out;
}

struct ParetoResult {
  bool optimal = false;
  std::string witness;  // empty when optimal
};

/// Local certificate for a converged m-partition: no generator move inside
/// any region lowers its load integral, and no boundary vertex is strictly
/// cheaper to serve from a neighboring region.
inline ParetoResult pareto_local_certificate(const BaseStationState& state,
                                             const EnvironmentGraph& g,
                                             const MissionParams& params,
                                             const std::vector<double>& masses) {
  int m = state.agent_count();
  for (int i = 0; i < m; ++i) {
    const VertexSet& p = state.covering[i];
    auto members = p.to_vector();
    auto load_from = [&](Vertex c) {
      auto d = distances_in_subset(g, p, c);
      double load = 0.0;
      for (Vertex h : members) load += d[h] * masses[h];
      return load;
    };
    double incumbent = load_from(state.generators[i]);
    for (Vertex c : members) {
      if (load_from(c) < incumbent - 1e-12) {
        return {false, "agent " + std::to_string(i) +
                           " could move its generator to vertex " +
                           std::to_string(c)};
      }
    }
  }
  // Boundary exchange condition.
  std::vector<std::vector<double>> dist_to_gen(m);
  for (int i = 0; i < m; ++i) {
    dist_to_gen[i] =
        distances_in_subset(g, state.covering[i], state.generators[i]);
  }
  for (int i = 0; i < m; ++i) {
    for (Vertex k = 0; k < g.vertex_count(); ++k) {
      if (state.covering[i].contains(k)) continue;
      bool adjacent = false;
      for (auto [v, w] : g.neighbors(k)) {
        if (state.covering[i].contains(v)) {
          adjacent = true;
          break;
        }
      }
      if (!adjacent) continue;
      int j = state.identifier[k];
      VertexSet extended = state.covering[i];
      extended.insert(k);
      double mine = subgraph_distance(g, extended, state.generators[i], k) /
                    params.speeds[i];
      double theirs = dist_to_gen[j][k] / params.speeds[j];
      if (mine < theirs - 1e-12) {
        return {false, "agent " + std::to_string(i) +
                           " could claim boundary vertex " + std::to_string(k)};
      }
    }
  }
  return {true, ""};
}

/// Exhaustive certificate by direct enumeration: every generator tuple, and
/// every m-covering (each vertex assigned a nonempty agent subset). Only
/// for tiny instances; throws when the enumeration would be too large.
inline ParetoResult pareto_exhaustive_certificate(
    const BaseStationState& state, const EnvironmentGraph& g,
    const MissionParams& params, const std::vector<double>& masses) {
  int m = state.agent_count();
  int n = g.vertex_count();
  double tuple_work = std::pow(static_cast<double>(n), m);
  double covering_work = std::pow(std::pow(2.0, m) - 1.0, n);
  if (tuple_work > 2e6 || covering_work > 2e7) {
    throw std::length_error("pareto_exhaustive_certificate: instance too large");
  }
  double base = coverage_cost(state.covering, state.generators, params.speeds,
                              g, masses);

  // (i) all generator tuples against the fixed covering.
  std::vector<Vertex> tuple(m, 0);
  while (true) {
    double h = coverage_cost(state.covering, tuple, params.speeds, g, masses);
    if (h < base - 1e-9) {
      std::string w = "generator tuple (";
      for (int i = 0; i < m; ++i) w += (i ? "," : "") + std::to_string(tuple[i]);
      return {false, w + ") lowers the cost"};
    }
    int pos = m - 1;
    while (pos >= 0 && ++tuple[pos] == n) tuple[pos--] = 0;
    if (pos < 0) break;
  }

  // (ii) all m-coverings against the fixed generators.
  int choices = (1 << m) - 1;
  std::vector<int> assign(n, 0);  // value v encodes member mask v+1
  while (true) {
    std::vector<VertexSet> cov(m, VertexSet(n));
    for (Vertex k = 0; k < n; ++k) {
      int mask = assign[k] + 1;
      for (int i = 0; i < m; ++i) {
        if (mask & (1 << i)) cov[i].insert(k);
      }
    }
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i) {
      if (cov[i].empty() || !cov[i].contains(state.generators[i])) {
        feasible = false;  // cost would be infinite, cannot beat base
      }
    }
    if (feasible) {
      double h =
          coverage_cost(cov, state.generators, params.speeds, g, masses);
      if (h < base - 1e-9) {
        return {false, "an alternative covering lowers the cost"};
      }
    }
    int pos = n - 1;
    while (pos >= 0 && ++assign[pos] == choices) assign[pos--] = 0;
    if (pos < 0) break;
  }
  return {true, ""};
}

}  // namespace coverops
