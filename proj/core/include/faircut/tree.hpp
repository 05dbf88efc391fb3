#pragma once

#include <span>
#include <vector>

#include "faircut/graph.hpp"
#include "faircut/rational.hpp"

namespace faircut {

/// Rooted tree with the root at the source vertex. The edge into vertex v from
/// parent(v) is identified by the child id v itself; the root carries no edge.
/// Auxiliary vertices (is_real = false) are introduced by binarization or by
/// hierarchical embeddings: they belong to no demographic group and carry zero
/// vertex weight downstream. Structural edges flagged non-cuttable may never
/// enter a cut; they are a flag, not an infinite-cost sentinel, so cost sums
/// stay finite and exact.
struct RootedTree {
  VertexId root = 0;
  std::vector<VertexId> parent;        // parent[root] == -1
  std::vector<Rat> edge_cost;          // cost of edge (parent[v], v); root slot is 0
  std::vector<char> edge_cuttable;     // root slot unused
  std::vector<char> is_real;
  std::vector<std::vector<VertexId>> children;

  int size() const { return static_cast<int>(parent.size()); }
  bool is_root(VertexId v) const { return v == root; }

  int num_real() const;
  VertexId add_child(VertexId parent_id, Rat cost, bool cuttable, bool real);

  /// Depth of v = number of edges on the root path, i.e. |P(s,v)|.
  int depth(VertexId v) const;

  void validate() const;  // throws InputError on structural violations
};

/// Roots a tree-shaped WeightedGraph at its source. Throws InputError if the
/// graph is not a tree. All vertices real, all edges cuttable.
RootedTree tree_from_graph(const WeightedGraph& g);

/// The tree as a WeightedGraph; edges are emitted in ascending child id, so
/// edge ids are recoverable via graph_edge_of_child.
WeightedGraph tree_to_graph(const RootedTree& t);
EdgeId graph_edge_of_child(const RootedTree& t, VertexId child);

/// P(s,v) as the ordered list of edge ids (child ids) from the root down to v.
std::vector<VertexId> root_path(const RootedTree& t, VertexId v);

/// Vertices disconnected from the root after removing the given edges
/// (identified by child ids). Sorted; includes auxiliary vertices.
std::vector<VertexId> tree_protected(const RootedTree& t, std::span<const VertexId> cut_children);

/// Same, restricted to real vertices.
std::vector<VertexId> tree_protected_real(const RootedTree& t,
                                          std::span<const VertexId> cut_children);

/// Rebuilds the tree so every node has at most two children. Nodes with c > 2
/// children grow a cascade of c-2 auxiliary nodes joined by non-cuttable
/// zero-cost edges; original edges keep their child id, cost and flag. For any
/// set of real vertices, the minimum cuttable-cut cost separating it from the
/// root is unchanged.
RootedTree binarize(const RootedTree& t);

/// A cut in a tree: edges listed by child id, with recomputed cost and the
/// real protected vertices.
struct TreeCut {
  std::vector<VertexId> cut_children;     // sorted, unique
  Rat cost;
  std::vector<VertexId> protected_real;   // sorted
};

TreeCut make_tree_cut(const RootedTree& t, std::vector<VertexId> cut_children);

}  // namespace faircut
