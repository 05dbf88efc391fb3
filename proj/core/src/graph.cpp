#include "faircut/graph.hpp"

#include <algorithm>
#include <queue>

#include "faircut/errors.hpp"

namespace faircut {

WeightedGraph::WeightedGraph(int num_vertices, VertexId source)
    : n_(num_vertices), source_(source) {
  require(num_vertices >= 1, "graph needs at least one vertex");
  require(source >= 0 && source < num_vertices, "source vertex out of range");
}

EdgeId WeightedGraph::add_edge(VertexId u, VertexId v, Rat cost) {
  require(u >= 0 && u < n_ && v >= 0 && v < n_, "edge endpoint out of range");
  require(u != v, "self-loops are not allowed");
  require(cost >= 0, "edge costs must be non-negative");
  edges_.push_back(Edge{u, v, std::move(cost)});
  return static_cast<EdgeId>(edges_.size()) - 1;
}

const Edge& WeightedGraph::edge(EdgeId e) const {
  require(e >= 0 && e < num_edges(), "unknown edge id " + std::to_string(e));
  return edges_[static_cast<std::size_t>(e)];
}

Rat WeightedGraph::total_cost() const {
  Rat sum = 0;
  for (const Edge& e : edges_) sum += e.cost;
  return sum;
}

Rat WeightedGraph::min_positive_cost() const {
  Rat best = 0;
  for (const Edge& e : edges_) {
    if (e.cost > 0 && (best == 0 || e.cost < best)) best = e.cost;
  }
  return best;
}

namespace {

// Adjacency as (neighbor, edge id) pairs, built on demand.
std::vector<std::vector<std::pair<VertexId, EdgeId>>> adjacency(const WeightedGraph& g) {
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  return adj;
}

std::vector<char> reachable_from_source(const WeightedGraph& g,
                                        const std::vector<char>& edge_cut) {
  auto adj = adjacency(g);
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<VertexId> stack{g.source()};
  seen[g.source()] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adj[v]) {
      if (edge_cut[e] || seen[w]) continue;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return seen;
}

}  // namespace

bool WeightedGraph::is_connected() const {
  std::vector<char> no_cut(num_edges(), 0);
  auto seen = reachable_from_source(*this, no_cut);
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::vector<VertexId> protected_set(const WeightedGraph& g, std::span<const EdgeId> cut) {
  std::vector<char> is_cut(g.num_edges(), 0);
  for (EdgeId e : cut) {
    require(e >= 0 && e < g.num_edges(), "unknown edge id " + std::to_string(e));
    is_cut[e] = 1;
  }
  auto seen = reachable_from_source(g, is_cut);
  std::vector<VertexId> prot;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!seen[v]) prot.push_back(v);
  }
  return prot;
}

std::vector<EdgeId> boundary(const WeightedGraph& g, std::span<const VertexId> s_set) {
  std::vector<char> in_s(g.num_vertices(), 0);
  for (VertexId v : s_set) {
    require(v >= 0 && v < g.num_vertices(), "unknown vertex id " + std::to_string(v));
    require(v != g.source(), "boundary: source must not be in S");
    in_s[v] = 1;
  }
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (in_s[ed.u] != in_s[ed.v]) out.push_back(e);
  }
  return out;
}

Rat cut_cost(const WeightedGraph& g, std::span<const EdgeId> cut) {
  Rat sum = 0;
  for (EdgeId e : cut) sum += g.edge(e).cost;
  return sum;
}

CutSolution make_cut_solution(const WeightedGraph& g, std::vector<EdgeId> cut) {
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  CutSolution sol;
  sol.cost = cut_cost(g, cut);
  sol.protected_vertices = protected_set(g, cut);
  sol.cut_edges = std::move(cut);
  return sol;
}

MergeResult merge_sources(const WeightedGraph& g, std::span<const VertexId> sources) {
  require(!sources.empty(), "merge_sources: empty source set");
  std::vector<char> merged(g.num_vertices(), 0);
  for (VertexId v : sources) {
    require(v >= 0 && v < g.num_vertices(), "unknown vertex id " + std::to_string(v));
    merged[v] = 1;
  }

  MergeResult out;
  out.vertex_map.assign(g.num_vertices(), -1);
  int next = 1;  // id 0 is the merged source
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out.vertex_map[v] = merged[v] ? 0 : next++;
  }
  out.graph = WeightedGraph(next, 0);
  out.edge_map.assign(g.num_edges(), -1);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (merged[ed.u] && merged[ed.v]) continue;  // internal edge, dropped
    out.edge_map[e] = out.graph.add_edge(out.vertex_map[ed.u], out.vertex_map[ed.v], ed.cost);
  }
  return out;
}

}  // namespace faircut
