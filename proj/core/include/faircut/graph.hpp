#pragma once

#include <span>
#include <vector>

#include "faircut/rational.hpp"

namespace faircut {

using VertexId = int;
using EdgeId = int;

struct Edge {
  VertexId u;
  VertexId v;
  Rat cost;
};

/// Undirected multigraph with non-negative edge costs and a designated source
/// vertex. Vertex ids are dense: 0..num_vertices()-1. Parallel edges are kept
/// distinct; self-loops are rejected. Immutable once built — every operation
/// below is a pure function, safe for concurrent readers.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int num_vertices, VertexId source);

  EdgeId add_edge(VertexId u, VertexId v, Rat cost);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  VertexId source() const { return source_; }
  const Edge& edge(EdgeId e) const;
  const std::vector<Edge>& edges() const { return edges_; }

  /// w(E): total cost over all edges.
  Rat total_cost() const;

  /// Smallest strictly positive edge cost, or 0 when there is none.
  Rat min_positive_cost() const;

  bool is_connected() const;

  /// Trees satisfy |E| = |V|-1 with full connectivity (parallels excluded
  /// automatically: a multigraph with a repeated edge cannot be a tree).
  bool is_tree() const { return num_edges() == n_ - 1 && is_connected(); }

 private:
  int n_ = 0;
  VertexId source_ = 0;
  std::vector<Edge> edges_;
};

/// The set prot(V, E \ cut, s): all vertices with no path to the source once
/// the cut edges are deleted. Sorted ascending. O(n + m).
std::vector<VertexId> protected_set(const WeightedGraph& g, std::span<const EdgeId> cut);

/// delta(S): edge ids with exactly one endpoint in S. Requires source not in S.
std::vector<EdgeId> boundary(const WeightedGraph& g, std::span<const VertexId> s_set);

Rat cut_cost(const WeightedGraph& g, std::span<const EdgeId> cut);

/// An edge subset together with its recomputed cost and protected set.
struct CutSolution {
  std::vector<EdgeId> cut_edges;           // sorted, unique
  Rat cost;                                // sum of cut edge costs
  std::vector<VertexId> protected_vertices;  // prot(V, E \ cut, s), sorted
};

CutSolution make_cut_solution(const WeightedGraph& g, std::vector<EdgeId> cut);

/// Result of contracting a vertex set into a single new source (id 0 in the
/// new graph). Edges internal to the merged set are dropped; crossing edges
/// survive as parallels. vertex_map sends old ids to new ids; edge_map sends
/// old edge ids to new edge ids or -1 for dropped edges.
struct MergeResult {
  WeightedGraph graph;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
};

MergeResult merge_sources(const WeightedGraph& g, std::span<const VertexId> sources);

}  // namespace faircut
