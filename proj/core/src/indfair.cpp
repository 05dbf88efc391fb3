#include "faircut/indfair.hpp"

#include <algorithm>

#include "faircut/errors.hpp"
#include "faircut/lp.hpp"
#include "faircut/rng.hpp"

namespace faircut {

void ProtectionSpec::validate(const WeightedGraph& g) const {
  require(static_cast<int>(probabilities.size()) == g.num_vertices(),
          "protection spec must cover every vertex");
  require(target >= 0 && target <= g.num_vertices() - 1, "target must lie in [0, n-1]");
  for (const Rat& p : probabilities) {
    require(p >= 0 && p <= 1, "protection probabilities must lie in [0,1]");
  }
  require(probabilities[g.source()] == 0, "the source cannot require protection");
}

std::vector<Rat> CutDistribution::marginals(int num_vertices) const {
  std::vector<Rat> marg(num_vertices, Rat(0));
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (VertexId v : support[i].protected_vertices) marg[v] += probabilities[i];
  }
  return marg;
}

void CutDistribution::validate() const {
  require(support.size() == probabilities.size(), "distribution arrays out of sync");
  require(!support.empty(), "distribution must have support");
  Rat total = 0;
  for (const Rat& p : probabilities) {
    require(p >= 0, "negative probability");
    total += p;
  }
  require(total == 1, "probabilities must sum to exactly 1");
}

SeparationResult separate(const WeightedGraph& g, long target, const Rat& budget,
                          const DualPoint& point, const TreeEmbedding& emb, const Rat& eps) {
  require(static_cast<int>(point.y.size()) == g.num_vertices(),
          "dual point must cover every vertex");
  for (const Rat& y : point.y) require(y >= 0, "dual point with negative y");

  AuxCutInstance inst;
  inst.graph = g;
  inst.budget = budget;
  inst.target = target;
  inst.vertex_weights = point.y;
  inst.vertex_weights[g.source()] = 0;

  SeparationResult res;
  AuxGeneralResult aux = auxcut_general(inst, emb, eps);
  if (aux.status != SolveStatus::Ok) {
    // No cut attains the target even at the inflated budget, so the budget-B
    // family is empty and every constraint quantified over it holds vacuously.
    res.membership = true;
    res.vacuous = true;
    return res;
  }
  if (aux.value > point.mu) {
    res.membership = false;
    res.violating_cut = std::move(aux.cut);
    res.violation_value = std::move(aux.value);
    return res;
  }
  res.membership = true;
  return res;
}

FeasibilityOutcome feasibility_round(const WeightedGraph& g, const ProtectionSpec& spec,
                                     const Rat& budget, const TreeEmbedding& emb,
                                     const IndFairOptions& opts) {
  spec.validate(g);
  require(budget >= 0, "budget must be non-negative");

  FeasibilityOutcome out;
  const int n = g.num_vertices();

  // Seed the support with one solver run weighted by the protection targets.
  {
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = budget;
    inst.target = spec.target;
    inst.vertex_weights = spec.probabilities;
    inst.vertex_weights[g.source()] = 0;
    AuxGeneralResult aux = auxcut_general(inst, emb, opts.aux_eps);
    ++out.oracle_calls;
    if (aux.status != SolveStatus::Ok) {
      out.status = RoundStatus::Infeasible;
      out.vacuous = true;
      return out;
    }
    out.distribution.support.push_back(std::move(aux.cut));
  }

  std::vector<VertexId> constrained;  // vertices with p_v > 0
  for (VertexId v = 0; v < n; ++v) {
    if (spec.probabilities[v] > 0) constrained.push_back(v);
  }

  const long cap = opts.iteration_cap_factor * n;
  for (long iter = 0; iter < cap; ++iter) {
    auto& support = out.distribution.support;

    LpProblem lp;
    lp.num_vars = static_cast<int>(support.size());
    lp.objective.assign(lp.num_vars, Rat(0));
    lp.want_farkas = true;
    for (VertexId v : constrained) {
      LpRow row;
      for (int f = 0; f < lp.num_vars; ++f) {
        if (std::binary_search(support[f].protected_vertices.begin(),
                               support[f].protected_vertices.end(), v)) {
          row.coeffs.push_back({f, Rat(1)});
        }
      }
      row.sense = RowSense::GreaterEqual;
      row.rhs = spec.probabilities[v];
      lp.rows.push_back(std::move(row));
    }
    LpRow total;
    for (int f = 0; f < lp.num_vars; ++f) total.coeffs.push_back({f, Rat(1)});
    total.sense = RowSense::Equal;
    total.rhs = 1;
    lp.rows.push_back(std::move(total));

    LpResult sol = solve_lp(lp);
    if (sol.status == LpStatus::Optimal) {
      CutDistribution dist;
      for (int f = 0; f < lp.num_vars; ++f) {
        if (sol.x[f] > 0) {
          dist.support.push_back(support[f]);
          dist.probabilities.push_back(sol.x[f]);
        }
      }
      dist.validate();
      internal_check(static_cast<int>(dist.support.size()) <= n,
                     "feasibility_round: basic solution support exceeds n");
      std::vector<Rat> marg = dist.marginals(n);
      for (VertexId v = 0; v < n; ++v) {
        internal_check(marg[v] >= spec.probabilities[v],
                       "feasibility_round: marginal below its target");
      }
      out.status = RoundStatus::Feasible;
      out.distribution = std::move(dist);
      return out;
    }

    internal_check(sol.status == LpStatus::Infeasible && !sol.farkas.empty(),
                   "feasibility_round: restricted LP neither feasible nor certified");

    // Farkas multipliers: y_v for the coverage rows, mu = -multiplier of the
    // convexity row; normalize so sum p_v y_v = mu + 1.
    DualPoint point;
    point.y.assign(n, Rat(0));
    for (std::size_t i = 0; i < constrained.size(); ++i) {
      internal_check(sol.farkas[i] >= 0, "feasibility_round: negative coverage multiplier");
      point.y[constrained[i]] = sol.farkas[i];
    }
    point.mu = -sol.farkas.back();
    Rat gap = -point.mu;
    for (VertexId v : constrained) gap += spec.probabilities[v] * point.y[v];
    internal_check(gap > 0, "feasibility_round: Farkas certificate with non-positive value");
    for (Rat& y : point.y) y /= gap;
    point.mu /= gap;

    SeparationResult sep = separate(g, spec.target, budget, point, emb, opts.aux_eps);
    ++out.oracle_calls;
    if (sep.membership) {
      out.status = RoundStatus::Infeasible;
      out.vacuous = sep.vacuous;
      return out;
    }
    // The new cut strictly violates a constraint every existing support cut
    // satisfies, so its protected set is new and the loop cannot revisit it.
    for (const CutSolution& f : support) {
      internal_check(f.protected_vertices != sep.violating_cut.protected_vertices,
                     "feasibility_round: separation returned a known protected set");
    }
    support.push_back(std::move(sep.violating_cut));
  }

  out.status = RoundStatus::Unresolved;
  return out;
}

std::vector<Rat> budget_grid(const WeightedGraph& g, const Rat& eps, long max_grid) {
  require(eps > 0 && eps < 1, "epsilon must lie in (0,1)");
  const Rat total = g.total_cost();
  const Rat w_min = g.min_positive_cost();
  std::vector<Rat> grid{Rat(0)};
  if (w_min > 0) {
    Rat step = Rat(1) + eps;
    Rat value = w_min;
    while (value < total) {
      grid.push_back(value);
      value *= step;
      if (static_cast<long>(grid.size()) > max_grid) {
        throw RefusalError("budget grid exceeds the configured bound");
      }
    }
  }
  if (total > 0) grid.push_back(total);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

IndFairResult indfair_solve(const WeightedGraph& g, const ProtectionSpec& spec, const Rat& eps,
                            const TreeEmbedding* emb, std::uint64_t seed,
                            const IndFairOptions& opts, bool full_sweep,
                            const EmbedConfig& embed_cfg) {
  spec.validate(g);
  TreeEmbedding local;
  if (emb == nullptr) {
    EmbedConfig cfg = embed_cfg;
    if (cfg.seed == 0) cfg.seed = derive_seed(seed, "embedding");
    local = build_embedding(g, cfg);
    emb = &local;
  }

  IndFairResult result;
  result.class_factor = (Rat(1) + opts.aux_eps) * emb->certified_stretch;

  bool solved = false;
  for (const Rat& budget : budget_grid(g, eps, opts.max_grid)) {
    FeasibilityOutcome fo = feasibility_round(g, spec, budget, *emb, opts);
    result.oracle_calls += fo.oracle_calls;
    result.sweep.push_back({budget, fo.status, fo.oracle_calls});
    if (fo.status == RoundStatus::Feasible && !solved) {
      solved = true;
      result.status = RoundStatus::Feasible;
      result.b_final = budget;
      result.distribution = std::move(fo.distribution);
      if (!full_sweep) break;
    }
  }
  if (!solved) result.status = RoundStatus::Infeasible;
  return result;
}

std::size_t sample_index(const CutDistribution& dist, std::mt19937_64& rng) {
  dist.validate();
  // Exact draw: scale all probabilities to a common denominator.
  mpz_class denom = 1;
  for (const Rat& p : dist.probabilities) {
    mpz_class d = p.get_den();
    mpz_class gcd;
    mpz_gcd(gcd.get_mpz_t(), denom.get_mpz_t(), d.get_mpz_t());
    denom = denom / gcd * d;
  }
  mpz_class draw = uniform_below(denom, rng);
  mpz_class cumulative = 0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    cumulative += mpz_class(dist.probabilities[i].get_num()) *
                  (denom / dist.probabilities[i].get_den());
    if (draw < cumulative) return i;
  }
  return dist.probabilities.size() - 1;  // unreachable for exact sums
}

CutSolution sample_cut(const CutDistribution& dist, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, "sample-cut"));
  return dist.support[sample_index(dist, rng)];
}

}  // namespace faircut
