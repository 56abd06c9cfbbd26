#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace coverops {

using Vertex = int;

/// Sentinel for "no path". Always compare with std::isinf, never use in sums.
inline constexpr double kInfiniteDistance =
    std::numeric_limits<double>::infinity();

/// Set of vertex ids over a fixed universe 0..n-1, stored as a bitmask.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static VertexSet full(int universe) {
    VertexSet s(universe);
    for (Vertex v = 0; v < universe; ++v) s.insert(v);
    return s;
  }

  int universe_size() const { return universe_; }

  bool contains(Vertex v) const {
    return v >= 0 && v < universe_ &&
           (words_[v >> 6] >> (v & 63)) & 1;
  }

  void insert(Vertex v) {
    check(v);
    std::uint64_t& w = words_[v >> 6];
    std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if (!(w & bit)) {
      w |= bit;
      ++count_;
    }
  }

  void erase(Vertex v) {
    check(v);
    std::uint64_t& w = words_[v >> 6];
    std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if (w & bit) {
      w &= ~bit;
      --count_;
    }
  }

  int size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool is_subset_of(const VertexSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  bool intersects(const VertexSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  VertexSet intersect(const VertexSet& other) const {
    VertexSet r(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      r.words_[i] = words_[i] & other.words_[i];
      r.count_ += std::popcount(r.words_[i]);
    }
    return r;
  }

  VertexSet unite(const VertexSet& other) const {
    VertexSet r(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      r.words_[i] = words_[i] | other.words_[i];
      r.count_ += std::popcount(r.words_[i]);
    }
    return r;
  }

  VertexSet difference(const VertexSet& other) const {
    VertexSet r(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      r.words_[i] = words_[i] & ~other.words_[i];
      r.count_ += std::popcount(r.words_[i]);
    }
    return r;
  }

  /// Members in ascending id order.
  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for (Vertex v = 0; v < universe_; ++v) {
      if (contains(v)) out.push_back(v);
    }
    return out;
  }

  Vertex first() const {
    for (Vertex v = 0; v < universe_; ++v) {
      if (contains(v)) return v;
    }
    return -1;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void check(Vertex v) const {
    if (v < 0 || v >= universe_) {
      throw std::out_of_range("VertexSet: vertex id out of range");
    }
  }

  int universe_ = 0;
  int count_ = 0;
  std::vector<std::uint64_t> words_;
};

struct GridSpec {
  int rows = 0;
  int cols = 0;
  double cell_size = 1.0;
};

struct Edge {
  Vertex u;
  Vertex v;
  double weight;
};

/// Weighted undirected graph over grid subregions. Immutable after
/// construction; all distance queries flow through it.
class EnvironmentGraph {
 public:
  EnvironmentGraph(int vertex_count, std::vector<Edge> edges,
                   std::optional<GridSpec> grid = std::nullopt)
      : vertex_count_(vertex_count),
        edges_(std::move(edges)),
        grid_(grid),
        adjacency_(vertex_count) {
    if (vertex_count_ <= 0) {
      throw std::invalid_argument("EnvironmentGraph: vertex_count must be positive");
    }
    std::vector<std::vector<Vertex>> seen(vertex_count_);
    for (const Edge& e : edges_) {
      if (e.u < 0 || e.u >= vertex_count_ || e.v < 0 || e.v >= vertex_count_) {
        throw std::invalid_argument("EnvironmentGraph: edge endpoint out of range");
      }
      if (e.u == e.v) {
        throw std::invalid_argument("EnvironmentGraph: self-loop");
      }
      if (!(e.weight > 0.0)) {
        throw std::invalid_argument("EnvironmentGraph: edge weight must be positive");
      }
      Vertex lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
      auto& s = seen[lo];
      if (std::find(s.begin(), s.end(), hi) != s.end()) {
        throw std::invalid_argument("EnvironmentGraph: duplicate edge");
      }
      s.push_back(hi);
      adjacency_[e.u].push_back({e.v, e.weight});
      adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
    }
  }

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::optional<GridSpec>& grid() const { return grid_; }

  /// Neighbors of v as (vertex, weight), ascending by vertex id.
  const std::vector<std::pair<Vertex, double>>& neighbors(Vertex v) const {
    return adjacency_[v];
  }

  /// Planar center of a vertex's cell; requires grid geometry.
  std::pair<double, double> cell_center(Vertex v) const {
    if (!grid_) throw std::logic_error("EnvironmentGraph: no grid geometry");
    int r = v / grid_->cols;
    int c = v % grid_->cols;
    return {(c + 0.5) * grid_->cell_size, (r + 0.5) * grid_->cell_size};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["vertex_count"] = vertex_count_;
    auto arr = nlohmann::json::array();
    for (const Edge& e : edges_) {
      arr.push_back({e.u, e.v, e.weight});
    }
    j["edges"] = arr;
    if (grid_) {
      j["grid"] = {{"rows", grid_->rows},
                   {"cols", grid_->cols},
                   {"cell_size", grid_->cell_size}};
    }
    return j;
  }

  static EnvironmentGraph from_json(const nlohmann::json& j) {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>(),
                       e.at(2).get<double>()});
    }
    std::optional<GridSpec> grid;
    if (j.contains("grid")) {
      grid = GridSpec{j["grid"].at("rows").get<int>(),
                      j["grid"].at("cols").get<int>(),
                      j["grid"].at("cell_size").get<double>()};
    }
    return EnvironmentGraph(j.at("vertex_count").get<int>(), std::move(edges),
                            grid);
  }

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::optional<GridSpec> grid_;
  std::vector<std::vector<std::pair<Vertex, double>>> adjacency_;
};

enum class WeightMode { unit, cell_size };

/// 4-neighbor grid over rows x cols cells; vertices are row-major.
inline EnvironmentGraph build_grid(int rows, int cols, double cell_size,
                                   WeightMode mode = WeightMode::unit) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("build_grid: invalid dimensions");
  }
  double w = (mode == WeightMode::unit) ? 1.0 : cell_size;
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Vertex v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1, w});
      if (r + 1 < rows) edges.push_back({v, v + cols, w});
    }
  }
  return EnvironmentGraph(rows * cols, std::move(edges),
                          GridSpec{rows, cols, cell_size});
}

namespace detail {

/// Dijkstra restricted to the induced subgraph G(subset), from several
/// sources at distance 0. Vertices outside subset stay at infinity.
inline std::vector<double> dijkstra_in_subset(
    const EnvironmentGraph& g, const VertexSet& subset,
    const std::vector<Vertex>& sources) {
  std::vector<double> dist(g.vertex_count(), kInfiniteDistance);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (Vertex s : sources) {
    if (!subset.contains(s)) continue;
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : g.neighbors(u)) {
      if (!subset.contains(v)) continue;
      double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Shortest-path distances within G(subset) from a single source.
inline std::vector<double> distances_in_subset(const EnvironmentGraph& g,
                                               const VertexSet& subset,
                                               Vertex source) {
  if (!subset.contains(source)) {
    throw std::domain_error("distances_in_subset: source not in subset");
  }
  return detail::dijkstra_in_subset(g, subset, {source});
}

/// Distances within G(subset) to the nearest member of targets.
inline std::vector<double> distances_to_set(const EnvironmentGraph& g,
                                            const VertexSet& subset,
                                            const VertexSet& targets) {
  return detail::dijkstra_in_subset(g, subset, targets.to_vector());
}

/// d_{Q'}(source, targets): min over targets of the shortest weighted path
/// length within G(subset). Empty targets evaluate to 0 (min over the empty
/// set is taken as 0 here and everywhere in this library).
inline double subgraph_distance(const EnvironmentGraph& g,
                                const VertexSet& subset, Vertex source,
                                const VertexSet& targets) {
  if (!subset.contains(source)) {
    throw std::domain_error("subgraph_distance: source not in subset");
  }
  if (targets.empty()) return 0.0;
  if (targets.contains(source)) return 0.0;
  auto dist = detail::dijkstra_in_subset(g, subset, {source});
  double best = kInfiniteDistance;
  for (Vertex t : targets.to_vector()) {
    best = std::min(best, dist[t]);
  }
  return best;
}

inline double subgraph_distance(const EnvironmentGraph& g,
                                const VertexSet& subset, Vertex source,
                                Vertex target) {
  VertexSet t(subset.universe_size());
  t.insert(target);
  return subgraph_distance(g, subset, source, t);
}

/// Minimum-weight path within G(subset) from source into targets. Among
/// equal-weight paths the lexicographically smallest vertex-id sequence is
/// returned, so traces are reproducible.
inline std::vector<Vertex> shortest_path_in_subset(const EnvironmentGraph& g,
                                                   const VertexSet& subset,
                                                   Vertex source,
                                                   const VertexSet& targets) {
  if (!subset.contains(source)) {
    throw std::domain_error("shortest_path_in_subset: source not in subset");
  }
  if (targets.contains(source)) return {source};
  // Distance-to-goal field, then greedy descent choosing the smallest
  // admissible neighbor. Relaxed values are exact sums, so at least one
  // neighbor satisfies the equality test bit-for-bit.
  auto dist = detail::dijkstra_in_subset(g, subset, targets.to_vector());
  if (std::isinf(dist[source])) {
    throw std::runtime_error("shortest_path_in_subset: no path to targets");
  }
  std::vector<Vertex> path{source};
  Vertex cur = source;
  while (!targets.contains(cur)) {
    Vertex next = -1;
    for (auto [v, w] : g.neighbors(cur)) {
      if (!subset.contains(v)) continue;
      if (w + dist[v] == dist[cur]) {
        next = v;
        break;  // neighbors are ascending by id
      }
    }
    if (next < 0) {
      throw std::logic_error("shortest_path_in_subset: descent stuck");
    }
    path.push_back(next);
    cur = next;
  }
  return path;
}

/// True iff the induced subgraph G(subset) is connected.
inline bool is_connected(const EnvironmentGraph& g, const VertexSet& subset) {
  if (subset.empty()) {
    throw std::domain_error("is_connected: empty subset");
  }
  Vertex start = subset.first();
  VertexSet visited(subset.universe_size());
  std::vector<Vertex> stack{start};
  visited.insert(start);
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (auto [v, w] : g.neighbors(u)) {
      if (subset.contains(v) && !visited.contains(v)) {
        visited.insert(v);
        stack.push_back(v);
      }
    }
  }
  return visited.size() == subset.size();
}

/// max_i (1/s_i) * sum over edges of the full-graph distance between the
/// edge endpoints. Used as the uncovered-time bound together with the
/// maximum inter-communication gap.
inline double diameter_bound(const EnvironmentGraph& g,
                             const std::vector<double>& speeds) {
  for (double s : speeds) {
    if (!(s > 0.0)) throw std::invalid_argument("diameter_bound: speed <= 0");
  }
  VertexSet all = VertexSet::full(g.vertex_count());
  // One single-source field per distinct edge endpoint.
  std::vector<std::vector<double>> fields(g.vertex_count());
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (fields[e.u].empty()) {
      fields[e.u] = detail::dijkstra_in_subset(g, all, {e.u});
    }
    total += fields[e.u][e.v];
  }
  double slowest = *std::min_element(speeds.begin(), speeds.end());
  return total / slowest;
}

}  // namespace coverops
