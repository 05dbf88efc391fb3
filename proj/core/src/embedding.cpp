#include "faircut/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "faircut/errors.hpp"
#include "faircut/lp.hpp"
#include "faircut/parallel.hpp"
#include "faircut/rng.hpp"

namespace faircut {

namespace {

struct SideCost {
  std::optional<Rat> keep;  // vertex on the root side
  std::optional<Rat> cut;   // vertex on the protected side
};

std::optional<Rat> add_opt(const std::optional<Rat>& a, const std::optional<Rat>& b) {
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

std::optional<Rat> min_opt(std::optional<Rat> a, const std::optional<Rat>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

Rat tree_cut_value(const RootedTree& t, std::span<const VertexId> s_real) {
  std::vector<char> in_s(t.size(), 0);
  for (VertexId v : s_real) {
    require(v >= 0 && v < t.size(), "tree_cut_value: unknown vertex");
    require(t.is_real[v], "tree_cut_value: subset must contain real vertices only");
    require(v != t.root, "tree_cut_value: root cannot be separated");
    in_s[v] = 1;
  }

  // Post-order over the tree; for each vertex the cheapest subtree completion
  // with the vertex on the root side vs. the protected side. Real vertices are
  // pinned by membership, auxiliary vertices are free, non-cuttable edges may
  // not cross sides.
  std::vector<SideCost> dp(t.size());
  std::vector<VertexId> order;
  order.reserve(t.size());
  std::vector<VertexId> stack{t.root};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (VertexId c : t.children[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId v = *it;
    SideCost self;
    self.keep = Rat(0);
    self.cut = Rat(0);
    if (t.is_real[v]) {
      if (in_s[v]) self.keep = std::nullopt;
      else self.cut = std::nullopt;
    }
    for (VertexId c : t.children[v]) {
      const SideCost& child = dp[c];
      const bool cuttable = t.edge_cuttable[c] != 0;
      // child on same side: free; crossing: pay the edge, cuttable only
      std::optional<Rat> keep_c = child.keep;
      std::optional<Rat> cut_c = child.cut;
      std::optional<Rat> cross_to_cut =
          cuttable && cut_c ? std::optional<Rat>(*cut_c + t.edge_cost[c]) : std::nullopt;
      std::optional<Rat> cross_to_keep =
          cuttable && keep_c ? std::optional<Rat>(*keep_c + t.edge_cost[c]) : std::nullopt;
      self.keep = add_opt(self.keep, min_opt(keep_c, cross_to_cut));
      self.cut = add_opt(self.cut, min_opt(cut_c, cross_to_keep));
    }
    dp[v] = std::move(self);
  }
  const std::optional<Rat>& rooted = dp[t.root].keep;
  internal_check(rooted.has_value(), "tree_cut_value: no feasible separation");
  return *rooted;
}

namespace {

Rat cluster_boundary_cost(const WeightedGraph& g, const std::vector<char>& in_cluster) {
  Rat sum = 0;
  for (const Edge& e : g.edges()) {
    if (in_cluster[e.u] != in_cluster[e.v]) sum += e.cost;
  }
  return sum;
}

// Seeded Fisher-Yates; uniform_int_distribution is implementation-defined and
// never used.
void shuffle_ids(std::vector<VertexId>& ids, std::mt19937_64& rng) {
  for (std::size_t i = ids.size(); i > 1; --i) {
    auto j = uniform_below(mpz_class(static_cast<unsigned long>(i)), rng).get_ui();
    std::swap(ids[i - 1], ids[j]);
  }
}

// Partition a cluster into two non-empty parts, preferring small ratio cuts
// w(delta(U)) / (|U| |W|) measured inside the induced subgraph. Exact by
// enumeration on small clusters; seeded local search above. Among near-optimal
// cuts one is picked at random so distinct seeds yield distinct trees.
std::pair<std::vector<VertexId>, std::vector<VertexId>> ratio_cut_partition(
    const WeightedGraph& g, const std::vector<VertexId>& cluster, std::mt19937_64& rng,
    int exact_bound) {
  const int c = static_cast<int>(cluster.size());
  internal_check(c >= 2, "ratio_cut_partition: cluster too small");

  std::vector<std::pair<int, int>> internal_edges;  // indices into cluster
  std::vector<Rat> internal_costs;
  {
    std::vector<int> pos(g.num_vertices(), -1);
    for (int i = 0; i < c; ++i) pos[cluster[i]] = i;
    for (const Edge& e : g.edges()) {
      if (pos[e.u] >= 0 && pos[e.v] >= 0) {
        internal_edges.push_back({pos[e.u], pos[e.v]});
        internal_costs.push_back(e.cost);
      }
    }
  }

  auto split_from_mask = [&](unsigned long mask) {
    std::vector<VertexId> a, b;
    a.push_back(cluster[0]);
    for (int i = 1; i < c; ++i) {
      if (mask & (1ul << (i - 1))) a.push_back(cluster[i]);
      else b.push_back(cluster[i]);
    }
    return std::make_pair(a, b);
  };

  if (c <= exact_bound) {
    // Enumerate bipartitions with cluster[0] pinned to side A.
    const unsigned long full = (1ul << (c - 1)) - 1;
    Rat best_num = 0;
    long best_den = 1;
    bool have = false;
    std::vector<unsigned long> near;
    // two passes: find optimum, then gather candidates within (1 + 1/4)
    for (int pass = 0; pass < 2; ++pass) {
      for (unsigned long mask = 0; mask < full; ++mask) {
        int size_a = 1 + static_cast<int>(__builtin_popcountl(mask));
        int size_b = c - size_a;
        Rat cut = 0;
        for (std::size_t k = 0; k < internal_edges.size(); ++k) {
          auto [iu, iv] = internal_edges[k];
          bool au = iu == 0 || (mask & (1ul << (iu - 1)));
          bool av = iv == 0 || (mask & (1ul << (iv - 1)));
          if (au != av) cut += internal_costs[k];
        }
        long den = static_cast<long>(size_a) * size_b;
        // compare cut/den against best_num/best_den without division
        if (pass == 0) {
          if (!have || cut * best_den < best_num * den) {
            best_num = cut;
            best_den = den;
            have = true;
          }
        } else {
          // within 5/4 of the optimum
          if (cut * best_den * 4 <= best_num * den * 5) near.push_back(mask);
        }
      }
    }
    internal_check(!near.empty(), "ratio_cut_partition: no candidate cut");
    auto idx = uniform_below(mpz_class(static_cast<unsigned long>(near.size())), rng).get_ui();
    return split_from_mask(near[idx]);
  }

  // Heuristic: seeded random balanced split plus greedy single moves.
  std::vector<VertexId> ids = cluster;
  shuffle_ids(ids, rng);
  std::vector<char> side(c, 0);  // by cluster index
  std::vector<int> pos(g.num_vertices(), -1);
  for (int i = 0; i < c; ++i) pos[cluster[i]] = i;
  for (int i = 0; i < c; ++i) {
    int ci = pos[ids[i]];
    side[ci] = i < c / 2 ? 0 : 1;
  }
  auto ratio_of = [&](const std::vector<char>& s) {
    int size_a = 0;
    for (char x : s) size_a += x == 0;
    Rat cut = 0;
    for (std::size_t k = 0; k < internal_edges.size(); ++k) {
      auto [iu, iv] = internal_edges[k];
      if (s[iu] != s[iv]) cut += internal_costs[k];
    }
    return std::make_pair(cut, static_cast<long>(size_a) * (c - size_a));
  };
  auto [cur_cut, cur_den] = ratio_of(side);
  for (int pass = 0; pass < 4; ++pass) {
    bool improved = false;
    for (int i = 0; i < c; ++i) {
      int on_a = 0;
      for (char x : side) on_a += x == 0;
      int size_here = side[i] == 0 ? on_a : c - on_a;
      if (size_here <= 1) continue;  // keep both parts non-empty
      side[i] ^= 1;
      auto [new_cut, new_den] = ratio_of(side);
      if (new_cut * cur_den < cur_cut * new_den) {
        cur_cut = new_cut;
        cur_den = new_den;
        improved = true;
      } else {
        side[i] ^= 1;
      }
    }
    if (!improved) break;
  }
  std::vector<VertexId> a, b;
  for (int i = 0; i < c; ++i) (side[i] == 0 ? a : b).push_back(cluster[i]);
  return {a, b};
}

// One hierarchical decomposition tree: real vertices sit at the leaves (ids
// shared with the graph), every non-singleton cluster not containing the
// source becomes an auxiliary interior node, clusters containing the source
// collapse into the root. The edge above a cluster weighs w(delta(cluster)).
RootedTree build_decomposition_tree(const WeightedGraph& g, std::mt19937_64& rng,
                                    int exact_partition_bound) {
  const int n = g.num_vertices();
  RootedTree t;
  t.root = g.source();
  t.parent.assign(n, -1);
  t.edge_cost.assign(n, Rat(0));
  t.edge_cuttable.assign(n, 1);
  t.is_real.assign(n, 1);
  t.children.assign(n, {});

  auto attach_existing = [&](VertexId child, VertexId par, Rat cost) {
    t.parent[child] = par;
    t.edge_cost[child] = std::move(cost);
    t.children[par].push_back(child);
  };

  // Explicit work list of (cluster without the source, node to attach under).
  struct Job {
    std::vector<VertexId> cluster;
    VertexId attach_at;
  };
  std::vector<Job> jobs;

  // Peel the source cluster: every split of a cluster containing s attaches
  // the non-s part under the root.
  std::vector<VertexId> cur;
  for (VertexId v = 0; v < n; ++v) cur.push_back(v);
  while (cur.size() > 1) {
    auto [a, b] = ratio_cut_partition(g, cur, rng, exact_partition_bound);
    bool s_in_a = std::find(a.begin(), a.end(), g.source()) != a.end();
    std::vector<VertexId>& keep = s_in_a ? a : b;
    std::vector<VertexId>& off = s_in_a ? b : a;
    jobs.push_back({off, t.root});
    cur = keep;
  }

  while (!jobs.empty()) {
    Job job = std::move(jobs.back());
    jobs.pop_back();
    std::vector<char> in_cluster(n, 0);
    for (VertexId v : job.cluster) in_cluster[v] = 1;
    Rat above = cluster_boundary_cost(g, in_cluster);
    if (job.cluster.size() == 1) {
      attach_existing(job.cluster[0], job.attach_at, std::move(above));
      continue;
    }
    VertexId aux = t.add_child(job.attach_at, std::move(above), /*cuttable=*/true,
                               /*real=*/false);
    auto [a, b] = ratio_cut_partition(g, job.cluster, rng, exact_partition_bound);
    jobs.push_back({std::move(a), aux});
    jobs.push_back({std::move(b), aux});
  }
  t.validate();
  return t;
}

struct SubsetData {
  std::vector<std::vector<VertexId>> subsets;
  std::vector<Rat> graph_cut;  // w(delta(S)) per subset
};

// All (or sampled) non-empty S of V \ {s}.
SubsetData enumerate_subsets(const WeightedGraph& g, bool exhaustive, long sample_count,
                             std::uint64_t seed) {
  const int n = g.num_vertices();
  std::vector<VertexId> others;
  for (VertexId v = 0; v < n; ++v) {
    if (v != g.source()) others.push_back(v);
  }
  SubsetData data;
  auto push_mask = [&](unsigned long mask) {
    std::vector<VertexId> s;
    std::vector<char> in_s(n, 0);
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (mask & (1ul << i)) {
        s.push_back(others[i]);
        in_s[others[i]] = 1;
      }
    }
    Rat cost = 0;
    for (const Edge& e : g.edges()) {
      if (in_s[e.u] != in_s[e.v]) cost += e.cost;
    }
    data.subsets.push_back(std::move(s));
    data.graph_cut.push_back(std::move(cost));
  };

  if (exhaustive) {
    const unsigned long total = 1ul << others.size();
    for (unsigned long mask = 1; mask < total; ++mask) push_mask(mask);
    return data;
  }

  // Sampled: membership coin per vertex, empty subsets rejected; works for any n.
  std::mt19937_64 rng(derive_seed(seed, "certify-sample"));
  for (long i = 0; i < sample_count; ++i) {
    std::vector<VertexId> s;
    std::vector<char> in_s(n, 0);
    while (s.empty()) {
      s.clear();
      std::fill(in_s.begin(), in_s.end(), 0);
      std::uint64_t bits = 0;
      int have = 0;
      for (std::size_t j = 0; j < others.size(); ++j) {
        if (have == 0) {
          bits = rng();
          have = 64;
        }
        if (bits & 1) {
          s.push_back(others[j]);
          in_s[others[j]] = 1;
        }
        bits >>= 1;
        --have;
      }
    }
    Rat cost = 0;
    for (const Edge& e : g.edges()) {
      if (in_s[e.u] != in_s[e.v]) cost += e.cost;
    }
    data.subsets.push_back(std::move(s));
    data.graph_cut.push_back(std::move(cost));
  }
  return data;
}

CertificationReport certify_on_subsets(const WeightedGraph& g, const TreeEmbedding& emb,
                                       const SubsetData& data, CertifyMode mode) {
  CertificationReport report;
  report.mode = mode;
  report.subsets_checked = static_cast<long>(data.subsets.size());
  const int k = static_cast<int>(emb.trees.size());

  std::vector<std::vector<Rat>> tree_vals(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    std::vector<Rat> vals(data.subsets.size());
    for (std::size_t s = 0; s < data.subsets.size(); ++s) {
      vals[s] = tree_cut_value(emb.trees[i], data.subsets[s]);
    }
    tree_vals[i] = std::move(vals);
  });

  report.c_embed = 0;
  bool any_ratio = false;
  for (std::size_t s = 0; s < data.subsets.size(); ++s) {
    const Rat& gval = data.graph_cut[s];
    Rat avg = 0;
    for (int i = 0; i < k; ++i) {
      const Rat& tval = tree_vals[i][s];
      if (gval > tval) {
        report.property1_ok = false;
        report.violations.push_back({data.subsets[s], i, gval, tval});
      }
      avg += emb.multipliers[i] * tval;
    }
    if (gval > 0) {
      Rat ratio = avg / gval;
      if (!any_ratio || ratio > report.c_embed) report.c_embed = ratio;
      any_ratio = true;
    }
  }
  if (!any_ratio) report.c_embed = 1;
  return report;
}

}  // namespace

CertificationReport certify(const WeightedGraph& g, const TreeEmbedding& emb,
                            const CertifySpec& spec) {
  require(!emb.trees.empty() && emb.trees.size() == emb.multipliers.size(),
          "certify: malformed embedding");
  Rat lam_sum = 0;
  for (const Rat& l : emb.multipliers) {
    require(l >= 0, "certify: negative multiplier");
    lam_sum += l;
  }
  require(lam_sum == 1, "certify: multipliers must sum to 1");

  if (spec.mode == CertifyMode::Exhaustive) {
    if (g.num_vertices() > spec.exhaustive_bound) {
      throw RefusalError("certify: exhaustive mode refused for n = " +
                         std::to_string(g.num_vertices()) + " > bound " +
                         std::to_string(spec.exhaustive_bound));
    }
    SubsetData data = enumerate_subsets(g, true, 0, 0);
    return certify_on_subsets(g, emb, data, CertifyMode::Exhaustive);
  }
  SubsetData data = enumerate_subsets(g, false, spec.sample_count, spec.seed);
  return certify_on_subsets(g, emb, data, CertifyMode::Sampled);
}

TreeEmbedding build_embedding(const WeightedGraph& g, const EmbedConfig& cfg) {
  require(g.num_vertices() >= 2, "build_embedding: need at least two vertices");
  require(g.is_connected(),
          "build_embedding: graph must be connected (pre-protect and drop components "
          "without the source first)");

  const int n = g.num_vertices();
  const bool exhaustive = n <= cfg.exhaustive_bound;

  TreeEmbedding emb;
  if (g.is_tree()) {
    emb.trees.push_back(tree_from_graph(g));
    emb.multipliers.push_back(1);
    SubsetData data = enumerate_subsets(g, exhaustive, cfg.sample_count,
                                        derive_seed(cfg.seed, "identity-cert"));
    emb.report = certify_on_subsets(g, emb, data,
                                    exhaustive ? CertifyMode::Exhaustive : CertifyMode::Sampled);
    internal_check(emb.report.property1_ok && emb.report.c_embed == 1,
                   "identity embedding must certify at stretch exactly 1");
    emb.certified_stretch = 1;
    return emb;
  }

  int k = cfg.num_trees;
  if (k <= 0) k = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;

  emb.trees.resize(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(cfg.seed, "decomposition-tree", i));
    emb.trees[i] = build_decomposition_tree(g, rng, cfg.exact_partition_bound);
  });

  SubsetData data =
      enumerate_subsets(g, exhaustive, cfg.sample_count, derive_seed(cfg.seed, "build-cert"));

  // Tree cut values per subset, then per-tree upscaling so the one-sided
  // domination w(delta(S)) <= w^i(delta_i(S)) holds on every checked subset.
  std::vector<std::vector<Rat>> tree_vals(k);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t i) {
    std::vector<Rat> vals(data.subsets.size());
    for (std::size_t s = 0; s < data.subsets.size(); ++s) {
      vals[s] = tree_cut_value(emb.trees[i], data.subsets[s]);
    }
    tree_vals[i] = std::move(vals);
  });

  for (int i = 0; i < k; ++i) {
    Rat scale = 1;
    for (std::size_t s = 0; s < data.subsets.size(); ++s) {
      const Rat& gval = data.graph_cut[s];
      const Rat& tval = tree_vals[i][s];
      if (gval == 0) continue;
      internal_check(tval > 0, "decomposition tree separates a positive graph cut for free");
      Rat ratio = gval / tval;
      if (ratio > scale) scale = ratio;
    }
    if (scale != 1) {
      for (VertexId v = 0; v < emb.trees[i].size(); ++v) {
        if (v != emb.trees[i].root) emb.trees[i].edge_cost[v] *= scale;
      }
      for (Rat& val : tree_vals[i]) val *= scale;
    }
  }

  // Multipliers minimizing the worst ratio over the checked subsets:
  //   min t  s.t.  sum_i lambda_i tval_i(S)/gval(S) <= t,  sum lambda = 1.
  // One constraint per subset would dwarf the LP, so rows are generated on
  // demand: solve over an active set, scan every subset for the worst
  // violated ratio vector, add it, repeat until none is violated.
  std::vector<std::vector<Rat>> rows;  // ratio vectors, one per subset
  for (std::size_t s = 0; s < data.subsets.size(); ++s) {
    if (data.graph_cut[s] == 0) continue;
    std::vector<Rat> r(k);
    for (int i = 0; i < k; ++i) r[i] = tree_vals[i][s] / data.graph_cut[s];
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  emb.multipliers.assign(k, Rat(0));
  if (k == 1 || rows.empty()) {
    emb.multipliers[0] = 1;
  } else {
    std::vector<std::size_t> active;
    active.reserve(rows.size());
    active.push_back(0);
    std::vector<Rat> lambda(k, Rat(0));
    while (true) {
      LpProblem lp;
      lp.num_vars = k + 1;  // lambdas then t
      lp.objective.assign(k + 1, Rat(0));
      lp.objective[k] = 1;
      for (std::size_t idx : active) {
        LpRow row;
        for (int i = 0; i < k; ++i) row.coeffs.push_back({i, rows[idx][i]});
        row.coeffs.push_back({k, Rat(-1)});
        row.sense = RowSense::LessEqual;
        row.rhs = 0;
        lp.rows.push_back(std::move(row));
      }
      LpRow convex;
      for (int i = 0; i < k; ++i) convex.coeffs.push_back({i, Rat(1)});
      convex.sense = RowSense::Equal;
      convex.rhs = 1;
      lp.rows.push_back(std::move(convex));
      LpResult sol = solve_lp(lp);
      internal_check(sol.status == LpStatus::Optimal, "multiplier LP must be solvable");
      for (int i = 0; i < k; ++i) lambda[i] = sol.x[i];
      const Rat& t_value = sol.x[k];

      std::size_t worst = rows.size();
      Rat worst_excess = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Rat avg = 0;
        for (int i = 0; i < k; ++i) avg += lambda[i] * rows[r][i];
        if (avg > t_value && (worst == rows.size() || avg - t_value > worst_excess)) {
          worst = r;
          worst_excess = avg - t_value;
        }
      }
      if (worst == rows.size()) break;
      active.push_back(worst);
      internal_check(active.size() <= rows.size() + 1,
                     "multiplier LP row generation failed to terminate");
    }
    emb.multipliers = lambda;
  }

  emb.report = certify_on_subsets(g, emb, data,
                                  exhaustive ? CertifyMode::Exhaustive : CertifyMode::Sampled);
  internal_check(emb.report.property1_ok,
                 "upscaled embedding must satisfy per-tree domination on checked subsets");
  emb.certified_stretch = emb.report.c_embed;
  return emb;
}

CutSolution tree_cut_to_graph_cut(const WeightedGraph& g, const RootedTree& tree,
                                  const TreeCut& cut) {
  for (VertexId v : cut.protected_real) {
    require(v >= 0 && v < g.num_vertices(), "tree cut protects a vertex unknown to the graph");
  }
  std::vector<EdgeId> edges = boundary(g, cut.protected_real);
  return make_cut_solution(g, std::move(edges));
}

}  // namespace faircut
