#include "faircut/demfair.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "faircut/errors.hpp"
#include "faircut/lp.hpp"
#include "faircut/parallel.hpp"
#include "faircut/rng.hpp"

namespace faircut {

Rat DemographicSpec::min_fraction() const {
  internal_check(!groups.empty(), "spec has no groups");
  Rat best = groups[0].fraction;
  for (const auto& grp : groups) best = std::min(best, grp.fraction);
  return best;
}

long DemographicSpec::required_count(int h) const {
  const auto& grp = groups[h];
  return rat_ceil_long(grp.fraction * static_cast<long>(grp.members.size()));
}

namespace {

void validate_groups(const DemographicSpec& spec, int limit, VertexId source,
                     const std::vector<char>* is_real) {
  require(!spec.groups.empty(), "demographic spec needs at least one group");
  for (const auto& grp : spec.groups) {
    require(!grp.members.empty(), "demographic group must be non-empty");
    require(grp.fraction > 0 && grp.fraction <= 1, "coverage fraction must lie in (0,1]");
    std::vector<VertexId> seen = grp.members;
    std::sort(seen.begin(), seen.end());
    require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
            "duplicate member in demographic group");
    for (VertexId v : grp.members) {
      require(v >= 0 && v < limit, "group member out of range");
      require(v != source, "the source cannot belong to a demographic group");
      if (is_real) require((*is_real)[v], "group member must be a real vertex");
    }
  }
}

}  // namespace

void DemographicSpec::validate_for_graph(const WeightedGraph& g) const {
  validate_groups(*this, g.num_vertices(), g.source(), nullptr);
}

void DemographicSpec::validate_for_tree(const RootedTree& t) const {
  validate_groups(*this, t.size(), t.root, &t.is_real);
}

// ---------------------------------------------------------------------------
// Tree dynamic program over sparse connected-count vectors.
// ---------------------------------------------------------------------------

namespace {

enum class DpCase : std::uint8_t {
  Leaf,
  KeepSingle,
  CutSingle,
  KeepBoth,
  CutLeft,
  CutRight,
  CutBoth,
};

struct DpEntry {
  Rat cost;
  DpCase kase = DpCase::Leaf;
  std::uint64_t left_key = 0;
  std::uint64_t right_key = 0;
};

using DpMap = std::map<std::uint64_t, DpEntry>;

struct KeyCodec {
  std::vector<int> shifts;
  std::vector<std::uint64_t> masks;

  explicit KeyCodec(const DemographicSpec& spec) {
    int shift = 0;
    for (const auto& grp : spec.groups) {
      const auto width = std::bit_width(grp.members.size());
      shifts.push_back(shift);
      masks.push_back((std::uint64_t{1} << width) - 1);
      shift += static_cast<int>(width);
      require(shift <= 63, "demfair dp: count-vector key exceeds 63 bits; refuse");
    }
  }

  std::uint64_t encode_membership(VertexId v, const DemographicSpec& spec) const {
    std::uint64_t key = 0;
    for (std::size_t h = 0; h < spec.groups.size(); ++h) {
      const auto& m = spec.groups[h].members;
      if (std::find(m.begin(), m.end(), v) != m.end()) key += std::uint64_t{1} << shifts[h];
    }
    return key;
  }

  long count(std::uint64_t key, std::size_t h) const {
    return static_cast<long>((key >> shifts[h]) & masks[h]);
  }
};

void insert_min(DpMap& table, std::uint64_t key, DpEntry entry) {
  auto it = table.find(key);
  if (it == table.end() || entry.cost < it->second.cost) table[key] = std::move(entry);
}

}  // namespace

TreeDemFairResult demfair_tree_dp(const RootedTree& t, const DemographicSpec& spec,
                                  const DemFairOptions& opts) {
  t.validate();
  spec.validate_for_tree(t);
  for (VertexId v = 0; v < t.size(); ++v) {
    require(t.children[v].size() <= 2, "demfair_tree_dp expects a binarized tree");
  }

  // Refuse tables that cannot fit the configured budget. The sparse map is
  // usually far smaller, but the product bound is the honest worst case.
  long double estimate = t.size();
  for (const auto& grp : spec.groups) estimate *= static_cast<long double>(grp.members.size()) + 1;
  if (estimate > static_cast<long double>(opts.max_table_entries)) {
    throw RefusalError("demfair_tree_dp: table estimate exceeds memory budget");
  }

  const KeyCodec codec(spec);
  std::vector<std::uint64_t> membership(t.size(), 0);
  for (VertexId v = 0; v < t.size(); ++v) {
    if (t.is_real[v]) membership[v] = codec.encode_membership(v, spec);
  }

  std::vector<DpMap> tables(t.size());
  std::vector<VertexId> order;
  {
    std::vector<VertexId> stack{t.root};
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (VertexId c : t.children[v]) stack.push_back(c);
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    const std::uint64_t self = membership[v];
    DpMap& table = tables[v];
    const auto& kids = t.children[v];

    if (kids.empty()) {
      table[self] = DpEntry{Rat(0), DpCase::Leaf, 0, 0};
      continue;
    }
    if (kids.size() == 1) {
      const VertexId c = kids[0];
      for (const auto& [kc, ec] : tables[c]) {
        insert_min(table, kc + self, DpEntry{ec.cost, DpCase::KeepSingle, kc, 0});
      }
      if (t.edge_cuttable[c]) {
        insert_min(table, self, DpEntry{t.edge_cost[c], DpCase::CutSingle, 0, 0});
      }
      continue;
    }

    const VertexId l = kids[0], r = kids[1];
    for (const auto& [kl, el] : tables[l]) {
      for (const auto& [kr, er] : tables[r]) {
        insert_min(table, kl + kr + self,
                   DpEntry{el.cost + er.cost, DpCase::KeepBoth, kl, kr});
      }
    }
    if (t.edge_cuttable[l]) {
      for (const auto& [kr, er] : tables[r]) {
        insert_min(table, kr + self,
                   DpEntry{t.edge_cost[l] + er.cost, DpCase::CutLeft, 0, kr});
      }
    }
    if (t.edge_cuttable[r]) {
      for (const auto& [kl, el] : tables[l]) {
        insert_min(table, kl + self,
                   DpEntry{t.edge_cost[r] + el.cost, DpCase::CutRight, kl, 0});
      }
    }
    if (t.edge_cuttable[l] && t.edge_cuttable[r]) {
      insert_min(table, self, DpEntry{t.edge_cost[l] + t.edge_cost[r], DpCase::CutBoth, 0, 0});
    }
  }

  // Extract: smallest cost over root entries whose connected counts leave
  // enough protected members, i.e. k_h <= (1 - f_h) |V_h| exactly.
  const DpMap& root_table = tables[t.root];
  bool found = false;
  std::uint64_t best_key = 0;
  Rat best_cost;
  for (const auto& [key, entry] : root_table) {
    bool ok = true;
    for (std::size_t h = 0; h < spec.groups.size(); ++h) {
      const long n_h = static_cast<long>(spec.groups[h].members.size());
      if (Rat(codec.count(key, h)) > (Rat(1) - spec.groups[h].fraction) * n_h) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!found || entry.cost < best_cost) {
      found = true;
      best_key = key;
      best_cost = entry.cost;
    }
  }

  TreeDemFairResult result;
  if (!found) {
    result.status = SolveStatus::Infeasible;
    return result;
  }

  result.status = SolveStatus::Ok;
  std::vector<VertexId> cut_children;
  std::vector<std::pair<VertexId, std::uint64_t>> stack{{t.root, best_key}};
  while (!stack.empty()) {
    auto [v, key] = stack.back();
    stack.pop_back();
    auto it = tables[v].find(key);
    internal_check(it != tables[v].end(), "demfair dp: reconstruction key missing");
    const DpEntry& e = it->second;
    const auto& kids = t.children[v];
    switch (e.kase) {
      case DpCase::Leaf:
        break;
      case DpCase::KeepSingle:
        stack.push_back({kids[0], e.left_key});
        break;
      case DpCase::CutSingle:
        cut_children.push_back(kids[0]);
        break;
      case DpCase::KeepBoth:
        stack.push_back({kids[0], e.left_key});
        stack.push_back({kids[1], e.right_key});
        break;
      case DpCase::CutLeft:
        cut_children.push_back(kids[0]);
        stack.push_back({kids[1], e.right_key});
        break;
      case DpCase::CutRight:
        cut_children.push_back(kids[1]);
        stack.push_back({kids[0], e.left_key});
        break;
      case DpCase::CutBoth:
        cut_children.push_back(kids[0]);
        cut_children.push_back(kids[1]);
        break;
    }
  }

  result.cut = make_tree_cut(t, std::move(cut_children));
  internal_check(result.cut.cost == best_cost, "demfair dp: reconstructed cost mismatch");

  result.group_protected.assign(spec.groups.size(), 0);
  for (std::size_t h = 0; h < spec.groups.size(); ++h) {
    for (VertexId v : spec.groups[h].members) {
      if (std::binary_search(result.cut.protected_real.begin(),
                             result.cut.protected_real.end(), v)) {
        ++result.group_protected[h];
      }
    }
    internal_check(result.group_protected[h] >= spec.required_count(static_cast<int>(h)),
                   "demfair dp: coverage violated after reconstruction");
  }
  return result;
}

// ---------------------------------------------------------------------------
// LP relaxation, dependent rounding, amplification.
// ---------------------------------------------------------------------------

LpSolveOutcome demfair_lp_solve(const RootedTree& t, const DemographicSpec& spec) {
  t.validate();
  spec.validate_for_tree(t);

  std::vector<int> var_of(t.size(), -1);
  std::vector<VertexId> edge_of;
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root || !t.edge_cuttable[v]) continue;
    var_of[v] = static_cast<int>(edge_of.size());
    edge_of.push_back(v);
  }

  LpProblem lp;
  lp.num_vars = static_cast<int>(edge_of.size());
  lp.objective.resize(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j) lp.objective[j] = t.edge_cost[edge_of[j]];

  // y_v <= 1 for every non-root vertex.
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    LpRow row;
    for (VertexId e : root_path(t, v)) {
      if (var_of[e] >= 0) row.coeffs.push_back({var_of[e], Rat(1)});
    }
    row.sense = RowSense::LessEqual;
    row.rhs = 1;
    lp.rows.push_back(std::move(row));
  }

  // Group coverage: coefficient of x_e is the number of group members whose
  // root path uses e, i.e. members in the subtree below e.
  for (const auto& grp : spec.groups) {
    std::vector<char> is_member(t.size(), 0);
    for (VertexId v : grp.members) is_member[v] = 1;
    std::vector<long> below(t.size(), 0);
    std::vector<VertexId> order;
    std::vector<VertexId> stack{t.root};
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (VertexId c : t.children[v]) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      VertexId v = *it;
      below[v] = is_member[v] ? 1 : 0;
      for (VertexId c : t.children[v]) below[v] += below[c];
    }
    LpRow row;
    for (int j = 0; j < lp.num_vars; ++j) {
      if (below[edge_of[j]] > 0) row.coeffs.push_back({j, Rat(below[edge_of[j]])});
    }
    row.sense = RowSense::GreaterEqual;
    row.rhs = grp.fraction * static_cast<long>(grp.members.size());
    lp.rows.push_back(std::move(row));
  }

  LpResult sol = solve_lp(lp);
  LpSolveOutcome out;
  if (sol.status != LpStatus::Optimal) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  out.status = SolveStatus::Ok;
  out.fractional.x.assign(t.size(), Rat(0));
  for (int j = 0; j < lp.num_vars; ++j) out.fractional.x[edge_of[j]] = sol.x[j];
  out.fractional.y.assign(t.size(), Rat(0));
  // y by prefix sums down the tree
  std::vector<VertexId> stack{t.root};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId c : t.children[v]) {
      out.fractional.y[c] = out.fractional.y[v] + out.fractional.x[c];
      stack.push_back(c);
    }
  }
  out.fractional.objective = sol.objective;
  return out;
}

TreeCut round_once(const RootedTree& t, const FractionalCut& frac, std::mt19937_64& rng) {
  require(static_cast<int>(frac.x.size()) == t.size() &&
              static_cast<int>(frac.y.size()) == t.size(),
          "round_once: fractional solution does not match the tree");

  // Edges in non-decreasing |P_e| = depth of the parent endpoint, ties by id.
  std::vector<std::pair<int, VertexId>> order;
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v != t.root) order.push_back({t.depth(v) - 1, v});
  }
  std::sort(order.begin(), order.end());

  std::vector<char> blocked(t.size(), 0);
  std::vector<VertexId> cut;
  for (auto [unused_depth, v] : order) {
    const VertexId u = t.parent[v];
    if (blocked[u]) {
      blocked[v] = 1;
      continue;
    }
    const Rat& path_mass = frac.y[u];  // x(P_e)
    if (path_mass < 1) {
      Rat p = frac.x[v] / (Rat(1) - path_mass);
      require(p >= 0 && p <= 1, "round_once: selection probability outside [0,1]");
      if (bernoulli_exact(p, rng)) {
        cut.push_back(v);
        blocked[v] = 1;
        continue;
      }
    }
    blocked[v] = 0;
  }
  return make_tree_cut(t, std::move(cut));
}

long demfair_repetition_count(int gamma, const Rat& eps, const Rat& min_fraction) {
  require(gamma >= 1, "gamma must be at least 1");
  require(eps > 0 && eps < 1, "epsilon must lie in (0,1)");
  require(min_fraction > 0 && min_fraction <= 1, "min fraction must lie in (0,1]");
  const double beta = 2.0;
  const double log_term = gamma == 1 ? 1.0 : std::log(static_cast<double>(gamma));
  const double denom = rat_to_double(eps * eps * min_fraction);
  const double raw = 10.0 * beta * log_term / denom;
  if (!(raw < 1e9)) {
    throw RefusalError("repetition count overflows a sane budget; raise epsilon or min f");
  }
  long n = static_cast<long>(std::ceil(raw));
  return std::max(1L, n);
}

TreeDemFairResult demfair_lp_round(const RootedTree& t, const DemographicSpec& spec,
                                   const Rat& eps, std::uint64_t seed,
                                   const DemFairOptions& opts) {
  require(eps > 0 && eps < 1, "epsilon must lie in (0,1)");
  LpSolveOutcome lp = demfair_lp_solve(t, spec);
  TreeDemFairResult result;
  if (lp.status != SolveStatus::Ok) {
    result.status = lp.status;
    return result;
  }

  const long n_reps = demfair_repetition_count(spec.num_groups(), eps, spec.min_fraction());
  const Rat cost_budget = Rat(opts.markov_constant) * n_reps * lp.fractional.objective;

  std::vector<Rat> thresholds;  // (1-eps) f_h n_h
  for (const auto& grp : spec.groups) {
    thresholds.push_back((Rat(1) - eps) * grp.fraction * static_cast<long>(grp.members.size()));
  }

  bool have_best = false;
  std::size_t best_bad = 0;
  for (long attempt = 0; attempt < opts.retry_cap; ++attempt) {
    std::vector<TreeCut> runs(n_reps);
    parallel_for(static_cast<std::size_t>(n_reps), [&](std::size_t i) {
      std::mt19937_64 rng(derive_seed(seed, "demfair-round",
                                      static_cast<std::uint64_t>(attempt) * n_reps + i));
      runs[i] = round_once(t, lp.fractional, rng);
    });
    std::vector<VertexId> all;
    for (const TreeCut& run : runs) {
      all.insert(all.end(), run.cut_children.begin(), run.cut_children.end());
    }
    TreeCut merged = make_tree_cut(t, std::move(all));

    std::vector<long> counts(spec.groups.size(), 0);
    std::size_t bad = 0;
    for (std::size_t h = 0; h < spec.groups.size(); ++h) {
      for (VertexId v : spec.groups[h].members) {
        if (std::binary_search(merged.protected_real.begin(), merged.protected_real.end(), v)) {
          ++counts[h];
        }
      }
      if (Rat(counts[h]) < thresholds[h]) ++bad;
    }
    const bool cost_ok = merged.cost <= cost_budget;

    if (bad == 0 && cost_ok) {
      result.status = SolveStatus::Ok;
      result.cut = std::move(merged);
      result.group_protected = std::move(counts);
      result.repetitions = n_reps;
      result.retries = attempt;
      result.lp_objective = lp.fractional.objective;
      return result;
    }
    const std::size_t badness = bad + (cost_ok ? 0 : 1);
    if (!have_best || badness < best_bad ||
        (badness == best_bad && merged.cost < result.cut.cost)) {
      have_best = true;
      best_bad = badness;
      result.cut = std::move(merged);
      result.group_protected = std::move(counts);
      result.retries = attempt + 1;
    }
  }
  result.status = SolveStatus::RetryCapExceeded;
  result.repetitions = n_reps;
  result.lp_objective = lp.fractional.objective;
  return result;
}

// ---------------------------------------------------------------------------
// General graphs via the embedding.
// ---------------------------------------------------------------------------

GeneralDemFairResult demfair_general(const WeightedGraph& g, const DemographicSpec& spec,
                                     DemFairMethod method, const TreeEmbedding* emb,
                                     const Rat& eps, std::uint64_t seed,
                                     const DemFairOptions& opts, const EmbedConfig& embed_cfg) {
  spec.validate_for_graph(g);
  TreeEmbedding local;
  if (emb == nullptr) {
    EmbedConfig cfg = embed_cfg;
    if (cfg.seed == 0) cfg.seed = derive_seed(seed, "embedding");
    local = build_embedding(g, cfg);
    emb = &local;
  }

  const int k = static_cast<int>(emb->trees.size());
  std::vector<TreeDemFairResult> tree_results(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    if (method == DemFairMethod::Dp) {
      tree_results[i] = demfair_tree_dp(binarize(emb->trees[i]), spec, opts);
    } else {
      tree_results[i] =
          demfair_lp_round(emb->trees[i], spec, eps, derive_seed(seed, "tree-solve", i), opts);
    }
  });

  GeneralDemFairResult result;
  result.certified_stretch = emb->certified_stretch;
  result.tree_costs.assign(k, Rat(0));
  int best = -1;
  std::vector<CutSolution> lifted(k);
  for (int i = 0; i < k; ++i) {
    if (tree_results[i].status != SolveStatus::Ok) continue;
    lifted[i] = tree_cut_to_graph_cut(g, emb->trees[i], tree_results[i].cut);
    result.tree_costs[i] = lifted[i].cost;
    if (best < 0 || lifted[i].cost < lifted[best].cost) best = i;
  }
  if (best < 0) {
    result.status = tree_results.empty() ? SolveStatus::Infeasible : tree_results[0].status;
    return result;
  }

  result.status = SolveStatus::Ok;
  result.chosen_tree = best;
  result.cut = std::move(lifted[best]);
  result.repetitions = tree_results[best].repetitions;
  result.retries = tree_results[best].retries;
  result.lp_objective = tree_results[best].lp_objective;

  result.group_protected.assign(spec.groups.size(), 0);
  for (std::size_t h = 0; h < spec.groups.size(); ++h) {
    for (VertexId v : spec.groups[h].members) {
      if (std::binary_search(result.cut.protected_vertices.begin(),
                             result.cut.protected_vertices.end(), v)) {
        ++result.group_protected[h];
      }
    }
  }
  return result;
}

}  // namespace faircut
