#include "faircut/auxcut.hpp"

#include <algorithm>
#include <map>

#include "faircut/errors.hpp"
#include "faircut/parallel.hpp"

namespace faircut {

void AuxCutInstance::validate() const {
  require(budget >= 0, "budget must be non-negative");
  require(target >= 0 && target <= graph.num_vertices() - 1,
          "target must lie in [0, n-1]");
  require(static_cast<int>(vertex_weights.size()) == graph.num_vertices(),
          "vertex weight vector must match the graph");
  for (const Rat& a : vertex_weights) require(a >= 0, "vertex weights must be non-negative");
  require(vertex_weights[graph.source()] == 0, "the source carries weight 0");
}

DiscretizeResult discretize_costs(std::span<const Rat> costs, const Rat& budget,
                                  const Rat& eps) {
  require(budget > 0, "discretize: budget must be positive (budget 0 bypasses the DP)");
  require(eps > 0, "discretize: epsilon must be positive");
  const long m = static_cast<long>(costs.size());
  DiscretizeResult out;
  out.budget = rat_ceil_long(Rat(m) / eps);
  out.lambda = Rat(out.budget) / budget;
  out.costs.reserve(costs.size());
  for (const Rat& w : costs) {
    require(w >= 0, "discretize: negative cost");
    out.costs.push_back(rat_floor_long(out.lambda * w));
  }
  return out;
}

namespace {

enum class AuxCase : std::uint8_t {
  Leaf,
  KeepSingle,
  CutSingle,
  KeepBoth,
  CutLeft,
  CutRight,
  CutBoth,
};

struct AuxKey {
  long spend;
  int connected;  // real vertices connected to the subtree root
  auto operator<=>(const AuxKey&) const = default;
};

struct AuxEntry {
  Rat value;  // connected real weight within the subtree
  AuxCase kase = AuxCase::Leaf;
  AuxKey left{0, 0};
  AuxKey right{0, 0};
};

using AuxMap = std::map<AuxKey, AuxEntry>;

void insert_min(AuxMap& table, AuxKey key, AuxEntry entry) {
  auto it = table.find(key);
  if (it == table.end() || entry.value < it->second.value) table[key] = std::move(entry);
}

// Within each connected-count the entries are already unique per spend; drop
// those whose value does not improve on a cheaper spend (knapsack Pareto).
void prune(AuxMap& table) {
  std::map<int, Rat> best_by_k;
  for (auto it = table.begin(); it != table.end();) {
    auto found = best_by_k.find(it->first.connected);
    if (found != best_by_k.end() && found->second <= it->second.value) {
      it = table.erase(it);
    } else {
      best_by_k[it->first.connected] = it->second.value;
      ++it;
    }
  }
}

}  // namespace

AuxTreeResult auxcut_tree(const RootedTree& t, const Rat& budget, long target,
                          std::span<const Rat> vertex_weights, const Rat& eps,
                          const AuxOptions& opts) {
  t.validate();
  require(budget >= 0, "budget must be non-negative");
  require(eps > 0, "epsilon must be positive");

  const RootedTree bt = binarize(t);
  auto weight = [&](VertexId v) -> Rat {
    if (!bt.is_real[v]) return 0;
    require(v < static_cast<VertexId>(vertex_weights.size()),
            "missing vertex weight for real vertex " + std::to_string(v));
    require(vertex_weights[v] >= 0, "vertex weights must be non-negative");
    return vertex_weights[v];
  };
  require(weight(bt.root) == 0, "the source carries weight 0");

  const int n_real = bt.num_real();
  require(target >= 0 && target <= n_real - 1, "target must lie in [0, n_real - 1]");

  AuxTreeResult result;

  if (budget == 0) {
    // Only free edges are affordable; cutting all of them protects the most.
    std::vector<VertexId> zero_edges;
    for (VertexId v = 0; v < bt.size(); ++v) {
      if (v != bt.root && bt.edge_cuttable[v] && bt.edge_cost[v] == 0) zero_edges.push_back(v);
    }
    TreeCut cut = make_tree_cut(t, std::vector<VertexId>(zero_edges.begin(), zero_edges.end()));
    if (static_cast<long>(cut.protected_real.size()) < target) {
      result.status = SolveStatus::Infeasible;
      return result;
    }
    result.status = SolveStatus::Ok;
    result.exact = true;
    result.value = 0;
    for (VertexId v : cut.protected_real) result.value += weight(v);
    result.cut = std::move(cut);
    return result;
  }

  // Integer costs within the cap run exactly (a fractional budget floors
  // safely: integer spends never land strictly between); otherwise discretize.
  bool integral = true;
  Rat cuttable_total = 0;
  for (VertexId v = 0; v < bt.size(); ++v) {
    if (v == bt.root || !bt.edge_cuttable[v]) continue;
    if (!rat_is_integer(bt.edge_cost[v])) integral = false;
    cuttable_total += bt.edge_cost[v];
  }

  std::vector<long> disc_cost(bt.size(), 0);
  long disc_budget = 0;
  if (integral) {
    Rat capped = std::min(budget, cuttable_total);
    if (rat_floor(capped) <= opts.exact_budget_cap) {
      disc_budget = rat_floor_long(capped);
      for (VertexId v = 0; v < bt.size(); ++v) {
        if (v != bt.root && bt.edge_cuttable[v]) disc_cost[v] = rat_floor_long(bt.edge_cost[v]);
      }
      result.exact = true;
    } else {
      integral = false;
    }
  }
  if (!integral) {
    // m counts the edges of the instance as given, before binarization.
    std::vector<Rat> costs;
    for (VertexId v = 0; v < t.size(); ++v) {
      if (v != t.root) costs.push_back(t.edge_cost[v]);
    }
    DiscretizeResult disc = discretize_costs(costs, budget, eps);
    disc_budget = disc.budget;
    for (VertexId v = 0; v < bt.size(); ++v) {
      if (v != bt.root && bt.edge_cuttable[v]) {
        disc_cost[v] = rat_floor_long(disc.lambda * bt.edge_cost[v]);
      }
    }
    result.exact = false;
  }

  // Sparse table per vertex: (spend, connected real count) -> min connected weight.
  std::vector<AuxMap> tables(bt.size());
  std::vector<VertexId> order;
  {
    std::vector<VertexId> stack{bt.root};
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (VertexId c : bt.children[v]) stack.push_back(c);
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    const int self_real = bt.is_real[v] ? 1 : 0;
    const Rat self_w = weight(v);
    AuxMap& table = tables[v];
    const auto& kids = bt.children[v];

    if (kids.empty()) {
      table[{0, self_real}] = AuxEntry{self_w, AuxCase::Leaf};
      continue;
    }
    if (kids.size() == 1) {
      const VertexId c = kids[0];
      for (const auto& [kc, ec] : tables[c]) {
        insert_min(table, {kc.spend, kc.connected + self_real},
                   AuxEntry{ec.value + self_w, AuxCase::KeepSingle, kc});
      }
      if (bt.edge_cuttable[c] && disc_cost[c] <= disc_budget) {
        insert_min(table, {disc_cost[c], self_real}, AuxEntry{self_w, AuxCase::CutSingle});
      }
      prune(table);
      continue;
    }

    const VertexId l = kids[0], r = kids[1];
    for (const auto& [kl, el] : tables[l]) {
      for (const auto& [kr, er] : tables[r]) {
        const long spend = kl.spend + kr.spend;
        if (spend > disc_budget) continue;
        insert_min(table, {spend, kl.connected + kr.connected + self_real},
                   AuxEntry{el.value + er.value + self_w, AuxCase::KeepBoth, kl, kr});
      }
    }
    if (bt.edge_cuttable[l]) {
      for (const auto& [kr, er] : tables[r]) {
        const long spend = disc_cost[l] + kr.spend;
        if (spend > disc_budget) continue;
        insert_min(table, {spend, kr.connected + self_real},
                   AuxEntry{er.value + self_w, AuxCase::CutLeft, {0, 0}, kr});
      }
    }
    if (bt.edge_cuttable[r]) {
      for (const auto& [kl, el] : tables[l]) {
        const long spend = disc_cost[r] + kl.spend;
        if (spend > disc_budget) continue;
        insert_min(table, {spend, kl.connected + self_real},
                   AuxEntry{el.value + self_w, AuxCase::CutRight, kl});
      }
    }
    if (bt.edge_cuttable[l] && bt.edge_cuttable[r] &&
        disc_cost[l] + disc_cost[r] <= disc_budget) {
      insert_min(table, {disc_cost[l] + disc_cost[r], self_real},
                 AuxEntry{self_w, AuxCase::CutBoth});
    }
    prune(table);
  }

  // Extract the cheapest connected weight among affordable entries leaving at
  // least `target` protected real vertices.
  const AuxMap& root_table = tables[bt.root];
  bool found = false;
  AuxKey best_key{0, 0};
  Rat best_value;
  for (const auto& [key, entry] : root_table) {
    if (key.connected > n_real - target) continue;
    if (!found || entry.value < best_value) {
      found = true;
      best_key = key;
      best_value = entry.value;
    }
  }
  if (!found) {
    result.status = SolveStatus::Infeasible;
    return result;
  }

  std::vector<VertexId> cut_children;
  std::vector<std::pair<VertexId, AuxKey>> stack{{bt.root, best_key}};
  while (!stack.empty()) {
    auto [v, key] = stack.back();
    stack.pop_back();
    auto it = tables[v].find(key);
    internal_check(it != tables[v].end(), "auxcut dp: reconstruction key missing");
    const AuxEntry& e = it->second;
    const auto& kids = bt.children[v];
    switch (e.kase) {
      case AuxCase::Leaf:
        break;
      case AuxCase::KeepSingle:
        stack.push_back({kids[0], e.left});
        break;
      case AuxCase::CutSingle:
        cut_children.push_back(kids[0]);
        break;
      case AuxCase::KeepBoth:
        stack.push_back({kids[0], e.left});
        stack.push_back({kids[1], e.right});
        break;
      case AuxCase::CutLeft:
        cut_children.push_back(kids[0]);
        stack.push_back({kids[1], e.right});
        break;
      case AuxCase::CutRight:
        cut_children.push_back(kids[1]);
        stack.push_back({kids[0], e.left});
        break;
      case AuxCase::CutBoth:
        cut_children.push_back(kids[0]);
        cut_children.push_back(kids[1]);
        break;
    }
  }

  // Cut children ids are shared between the binarized and the original tree.
  result.cut = make_tree_cut(t, std::move(cut_children));
  result.status = SolveStatus::Ok;
  result.value = 0;
  for (VertexId v : result.cut.protected_real) result.value += weight(v);

  Rat total_real = 0;
  for (VertexId v = 0; v < bt.size(); ++v) total_real += weight(v);
  internal_check(result.value == total_real - best_value,
                 "auxcut dp: recomputed value disagrees with the table");
  internal_check(static_cast<long>(result.cut.protected_real.size()) >= target,
                 "auxcut dp: target violated");
  const Rat cost_cap = result.exact ? budget : (Rat(1) + eps) * budget;
  internal_check(result.cut.cost <= cost_cap, "auxcut dp: budget violated");
  return result;
}

AuxGeneralResult auxcut_general(const AuxCutInstance& inst, const TreeEmbedding& emb,
                                const Rat& eps, const AuxOptions& opts) {
  inst.validate();
  require(!emb.trees.empty(), "auxcut_general: empty embedding");

  AuxGeneralResult result;
  result.tree_budget = emb.certified_stretch * inst.budget;

  const int k = static_cast<int>(emb.trees.size());
  std::vector<AuxTreeResult> tree_results(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    tree_results[i] = auxcut_tree(emb.trees[i], result.tree_budget, inst.target,
                                  inst.vertex_weights, eps, opts);
  });

  int best = -1;
  for (int i = 0; i < k; ++i) {
    if (tree_results[i].status != SolveStatus::Ok) continue;
    if (best < 0 || tree_results[i].value > tree_results[best].value) best = i;
  }
  if (best < 0) {
    result.status = SolveStatus::Infeasible;
    return result;
  }

  result.status = SolveStatus::Ok;
  result.chosen_tree = best;
  result.cut = tree_cut_to_graph_cut(inst.graph, emb.trees[best], tree_results[best].cut);
  result.value = 0;
  for (VertexId v : result.cut.protected_vertices) result.value += inst.vertex_weights[v];

  internal_check(result.value >= tree_results[best].value,
                 "auxcut_general: lifted value below the tree value");
  internal_check(static_cast<long>(result.cut.protected_vertices.size()) >= inst.target,
                 "auxcut_general: target violated");
  internal_check(result.cut.cost <= (Rat(1) + eps) * result.tree_budget,
                 "auxcut_general: budget class violated");
  return result;
}

}  // namespace faircut
