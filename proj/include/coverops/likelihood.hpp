#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coverops/graph.hpp"

namespace coverops {

/// Piecewise-constant-in-time probability mass function over vertices.
/// Right-continuous at segment boundaries: a query at a switch time sees
/// the new segment.
struct LikelihoodSchedule {
  struct Segment {
    double start;
    std::vector<double> masses;  // indexed by vertex id
  };
  std::vector<Segment> segments;

  void validate(int vertex_count) const {
    if (segments.empty()) {
      throw std::invalid_argument("LikelihoodSchedule: no segments");
    }
    if (segments.front().start != 0.0) {
      throw std::invalid_argument("LikelihoodSchedule: first segment must start at 0");
    }
    double prev = -1.0;
    for (const Segment& s : segments) {
      if (s.start <= prev) {
        throw std::invalid_argument(
            "LikelihoodSchedule: segment starts must be strictly increasing");
      }
      prev = s.start;
      if (static_cast<int>(s.masses.size()) != vertex_count) {
        throw std::invalid_argument("LikelihoodSchedule: mass vector size mismatch");
      }
      double sum = 0.0;
      for (double m : s.masses) {
        if (m < 0.0) {
          throw std::invalid_argument("LikelihoodSchedule: negative mass");
        }
        sum += m;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("LikelihoodSchedule: masses must sum to 1");
      }
    }
  }

  static LikelihoodSchedule uniform(int vertex_count) {
    return {{Segment{0.0, std::vector<double>(
                              vertex_count, 1.0 / vertex_count)}}};
  }

  static LikelihoodSchedule single(std::vector<double> masses) {
    return {{Segment{0.0, std::move(masses)}}};
  }
};

/// The mass vector active at time t.
inline const std::vector<double>& masses_at(const LikelihoodSchedule& s,
                                            double t) {
  if (t < 0.0) throw std::domain_error("masses_at: negative time");
  std::size_t idx = 0;
  while (idx + 1 < s.segments.size() && s.segments[idx + 1].start <= t) {
    ++idx;
  }
  return s.segments[idx].masses;
}

inline double global_mass(const LikelihoodSchedule& s, Vertex k, double t) {
  return masses_at(s, t).at(static_cast<std::size_t>(k));
}

/// Start time of the next segment strictly after t, or infinity.
inline double next_switch_after(const LikelihoodSchedule& s, double t) {
  for (const auto& seg : s.segments) {
    if (seg.start > t) return seg.start;
  }
  return kInfiniteDistance;
}

/// Agent-side timing view: coverage region copy, recently-added vertices,
/// and the gating pair (tau, omega). tau may be negative.
struct AgentTimingView {
  VertexSet region;          // P_i^A
  VertexSet recently_added;  // P_i^{A,pd}
  double tau = 0.0;          // tau_i^A
  double omega = 0.0;        // omega_i^A
};

enum class LikelihoodMode {
  instantaneous,  // evaluate the global field at the query time
  frozen          // evaluate it at the agent's last contact time
};

/// Recently-added vertices the agent must not yet enter. Equals the whole
/// recently-added set while the gate t - omega < tau is closed, empty after.
inline VertexSet prohibited_region(const AgentTimingView& view, double t) {
  if (t - view.omega < view.tau) return view.recently_added;
  return VertexSet(view.region.universe_size());
}

inline VertexSet active_region(const AgentTimingView& view, double t) {
  return view.region.difference(prohibited_region(view, t));
}

/// Local likelihood: the global mass gated by region membership and the
/// recently-added timing clause; zero elsewhere. Not renormalized.
inline double local_mass(const AgentTimingView& view,
                         const LikelihoodSchedule& s, Vertex k, double t,
                         LikelihoodMode mode = LikelihoodMode::instantaneous) {
  if (!view.region.contains(k)) return 0.0;
  if (t - view.omega < view.tau && view.recently_added.contains(k)) return 0.0;
  double query_time = (mode == LikelihoodMode::frozen) ? view.omega : t;
  return global_mass(s, k, query_time);
}

/// Gaussian mass centered at a planar point, discretized to cell centers
/// and normalized over the grid.
inline std::vector<double> gaussian_masses(const EnvironmentGraph& g,
                                           double cx, double cy,
                                           double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_masses: sigma <= 0");
  std::vector<double> masses(g.vertex_count());
  double sum = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    auto [x, y] = g.cell_center(v);
    double dx = x - cx, dy = y - cy;
    masses[v] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    sum += masses[v];
  }
  for (double& m : masses) m /= sum;
  return masses;
}

}  // namespace coverops
