#include "faircut/tree.hpp"

#include <algorithm>

#include "faircut/errors.hpp"

namespace faircut {

int RootedTree::num_real() const {
  int c = 0;
  for (char r : is_real) c += r != 0;
  return c;
}

VertexId RootedTree::add_child(VertexId parent_id, Rat cost, bool cuttable, bool real) {
  require(parent_id >= 0 && parent_id < size(), "add_child: unknown parent");
  VertexId v = size();
  parent.push_back(parent_id);
  edge_cost.push_back(std::move(cost));
  edge_cuttable.push_back(cuttable ? 1 : 0);
  is_real.push_back(real ? 1 : 0);
  children.emplace_back();
  children[parent_id].push_back(v);
  return v;
}

int RootedTree::depth(VertexId v) const {
  require(v >= 0 && v < size(), "unknown vertex id " + std::to_string(v));
  int d = 0;
  while (v != root) {
    v = parent[v];
    ++d;
  }
  return d;
}

void RootedTree::validate() const {
  const int n = size();
  require(n >= 1, "empty tree");
  require(root >= 0 && root < n, "root out of range");
  require(parent[root] == -1, "root must have no parent");
  require(is_real[root], "root must be a real vertex");
  int reachable = 0;
  std::vector<VertexId> stack{root};
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    ++reachable;
    for (VertexId c : children[v]) {
      require(c >= 0 && c < n && parent[c] == v, "child/parent mismatch");
      require(!seen[c], "cycle detected");
      require(edge_cost[c] >= 0, "negative edge cost");
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  require(reachable == n, "tree is not connected");
}

RootedTree tree_from_graph(const WeightedGraph& g) {
  require(g.is_tree(), "graph is not a tree");
  const int n = g.num_vertices();
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  RootedTree t;
  t.root = g.source();
  t.parent.assign(n, -1);
  t.edge_cost.assign(n, Rat(0));
  t.edge_cuttable.assign(n, 1);
  t.is_real.assign(n, 1);
  t.children.assign(n, {});
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{t.root};
  seen[t.root] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      t.parent[w] = v;
      t.edge_cost[w] = g.edge(e).cost;
      t.children[v].push_back(w);
      stack.push_back(w);
    }
  }
  for (auto& kids : t.children) std::sort(kids.begin(), kids.end());
  return t;
}

WeightedGraph tree_to_graph(const RootedTree& t) {
  WeightedGraph g(t.size(), t.root);
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    g.add_edge(t.parent[v], v, t.edge_cost[v]);
  }
  return g;
}

EdgeId graph_edge_of_child(const RootedTree& t, VertexId child) {
  require(child != t.root, "root has no incoming edge");
  require(child >= 0 && child < t.size(), "unknown vertex id");
  return child > t.root ? child - 1 : child;
}

std::vector<VertexId> root_path(const RootedTree& t, VertexId v) {
  require(v >= 0 && v < t.size(), "unknown vertex id " + std::to_string(v));
  std::vector<VertexId> path;
  while (v != t.root) {
    path.push_back(v);
    v = t.parent[v];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<VertexId> tree_protected(const RootedTree& t,
                                     std::span<const VertexId> cut_children) {
  std::vector<char> cut(t.size(), 0);
  for (VertexId c : cut_children) {
    require(c >= 0 && c < t.size() && c != t.root, "invalid cut edge (child id)");
    cut[c] = 1;
  }
  std::vector<char> connected(t.size(), 0);
  std::vector<VertexId> stack{t.root};
  connected[t.root] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId c : t.children[v]) {
      if (cut[c]) continue;
      connected[c] = 1;
      stack.push_back(c);
    }
  }
  std::vector<VertexId> prot;
  for (VertexId v = 0; v < t.size(); ++v) {
    if (!connected[v]) prot.push_back(v);
  }
  return prot;
}

std::vector<VertexId> tree_protected_real(const RootedTree& t,
                                          std::span<const VertexId> cut_children) {
  std::vector<VertexId> all = tree_protected(t, cut_children);
  std::vector<VertexId> real;
  for (VertexId v : all) {
    if (t.is_real[v]) real.push_back(v);
  }
  return real;
}

RootedTree binarize(const RootedTree& t) {
  RootedTree out = t;
  const int original = t.size();
  for (VertexId v = 0; v < original; ++v) {
    if (out.children[v].size() <= 2) continue;
    std::vector<VertexId> kids = out.children[v];
    out.children[v].clear();
    VertexId cur = v;
    std::size_t i = 0;
    while (kids.size() - i > 2) {
      VertexId kid = kids[i++];
      out.parent[kid] = cur;
      out.children[cur].push_back(kid);
      VertexId aux = out.add_child(cur, Rat(0), /*cuttable=*/false, /*real=*/false);
      cur = aux;
    }
    for (; i < kids.size(); ++i) {
      out.parent[kids[i]] = cur;
      out.children[cur].push_back(kids[i]);
    }
  }
  return out;
}

TreeCut make_tree_cut(const RootedTree& t, std::vector<VertexId> cut_children) {
  std::sort(cut_children.begin(), cut_children.end());
  cut_children.erase(std::unique(cut_children.begin(), cut_children.end()),
                     cut_children.end());
  TreeCut cut;
  cut.cost = 0;
  for (VertexId c : cut_children) {
    require(c >= 0 && c < t.size() && c != t.root, "invalid cut edge (child id)");
    cut.cost += t.edge_cost[c];
  }
  cut.protected_real = tree_protected_real(t, cut_children);
  cut.cut_children = std::move(cut_children);
  return cut;
}

}  // namespace faircut
