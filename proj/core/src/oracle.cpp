#include "faircut/oracle.hpp"

#include <algorithm>

#include "faircut/errors.hpp"
#include "faircut/lp.hpp"

namespace faircut {

namespace {

struct SubsetEnumerator {
  std::vector<VertexId> others;  // non-source vertices, ascending
  const WeightedGraph& g;

  SubsetEnumerator(const WeightedGraph& graph, int max_n) : g(graph) {
    if (graph.num_vertices() > max_n) {
      throw RefusalError("oracle refused: n = " + std::to_string(graph.num_vertices()) +
                         " exceeds the enumeration bound " + std::to_string(max_n));
    }
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      if (v != graph.source()) others.push_back(v);
    }
  }

  unsigned long subset_count() const { return 1ul << others.size(); }

  std::vector<VertexId> materialize(unsigned long mask) const {
    std::vector<VertexId> s;
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (mask & (1ul << i)) s.push_back(others[i]);
    }
    return s;
  }

  Rat boundary_cost(unsigned long mask) const {
    std::vector<char> in_s(g.num_vertices(), 0);
    for (std::size_t i = 0; i < others.size(); ++i) {
      if (mask & (1ul << i)) in_s[others[i]] = 1;
    }
    Rat cost = 0;
    for (const Edge& e : g.edges()) {
      if (in_s[e.u] != in_s[e.v]) cost += e.cost;
    }
    return cost;
  }
};

OracleReport finish_report(const WeightedGraph& g, const SubsetEnumerator& en,
                           bool found, unsigned long best_mask, Rat best, long enumerated) {
  OracleReport rep;
  rep.enumerated = enumerated;
  if (!found) return rep;
  rep.feasible = true;
  rep.optimum = std::move(best);
  rep.witness_set = en.materialize(best_mask);
  rep.witness_cut = make_cut_solution(g, boundary(g, rep.witness_set));
  return rep;
}

}  // namespace

OracleReport oracle_sbmincc(const WeightedGraph& g, long target, const OracleOptions& opts) {
  require(target >= 0 && target <= g.num_vertices() - 1, "target must lie in [0, n-1]");
  SubsetEnumerator en(g, opts.max_n);
  bool found = false;
  unsigned long best_mask = 0;
  Rat best;
  for (unsigned long mask = 0; mask < en.subset_count(); ++mask) {
    if (__builtin_popcountl(mask) < target) continue;
    Rat cost = en.boundary_cost(mask);
    if (!found || cost < best) {
      found = true;
      best = std::move(cost);
      best_mask = mask;
    }
  }
  return finish_report(g, en, found, best_mask, std::move(best),
                       static_cast<long>(en.subset_count()));
}

OracleReport oracle_demfair(const WeightedGraph& g, const DemographicSpec& spec,
                            const OracleOptions& opts) {
  spec.validate_for_graph(g);
  SubsetEnumerator en(g, opts.max_n);

  // Group membership as bitmasks over the enumeration index space.
  std::vector<unsigned long> group_mask(spec.groups.size(), 0);
  std::vector<long> required(spec.groups.size());
  for (std::size_t h = 0; h < spec.groups.size(); ++h) {
    for (std::size_t i = 0; i < en.others.size(); ++i) {
      const auto& m = spec.groups[h].members;
      if (std::find(m.begin(), m.end(), en.others[i]) != m.end()) {
        group_mask[h] |= 1ul << i;
      }
    }
    required[h] = spec.required_count(static_cast<int>(h));
  }

  bool found = false;
  unsigned long best_mask = 0;
  Rat best;
  for (unsigned long mask = 0; mask < en.subset_count(); ++mask) {
    bool ok = true;
    for (std::size_t h = 0; h < spec.groups.size() && ok; ++h) {
      ok = __builtin_popcountl(mask & group_mask[h]) >= required[h];
    }
    if (!ok) continue;
    Rat cost = en.boundary_cost(mask);
    if (!found || cost < best) {
      found = true;
      best = std::move(cost);
      best_mask = mask;
    }
  }
  return finish_report(g, en, found, best_mask, std::move(best),
                       static_cast<long>(en.subset_count()));
}

OracleReport oracle_auxcut(const AuxCutInstance& inst, const OracleOptions& opts) {
  inst.validate();
  SubsetEnumerator en(inst.graph, opts.max_n);
  bool found = false;
  unsigned long best_mask = 0;
  Rat best;
  for (unsigned long mask = 0; mask < en.subset_count(); ++mask) {
    if (__builtin_popcountl(mask) < inst.target) continue;
    if (en.boundary_cost(mask) > inst.budget) continue;
    Rat value = 0;
    for (std::size_t i = 0; i < en.others.size(); ++i) {
      if (mask & (1ul << i)) value += inst.vertex_weights[en.others[i]];
    }
    if (!found || value > best) {
      found = true;
      best = std::move(value);
      best_mask = mask;
    }
  }
  return finish_report(inst.graph, en, found, best_mask, std::move(best),
                       static_cast<long>(en.subset_count()));
}

PlpOracleReport oracle_plp_feasible(const WeightedGraph& g, const ProtectionSpec& spec,
                                    const Rat& budget, const OracleOptions& opts) {
  spec.validate(g);
  require(budget >= 0, "budget must be non-negative");
  OracleOptions plp_opts = opts;
  plp_opts.max_n = opts.max_n_plp;
  SubsetEnumerator en(g, plp_opts.max_n);

  PlpOracleReport rep;
  std::vector<CutSolution> columns;
  for (unsigned long mask = 0; mask < en.subset_count(); ++mask) {
    if (__builtin_popcountl(mask) < spec.target) continue;
    if (en.boundary_cost(mask) > budget) continue;
    std::vector<VertexId> s = en.materialize(mask);
    CutSolution cut = make_cut_solution(g, boundary(g, s));
    // Coverage counts the full protected set of the closed cut, which may
    // strictly contain S.
    columns.push_back(std::move(cut));
  }
  rep.columns = static_cast<long>(columns.size());

  const int n = g.num_vertices();
  std::vector<VertexId> constrained;
  for (VertexId v = 0; v < n; ++v) {
    if (spec.probabilities[v] > 0) constrained.push_back(v);
  }

  LpProblem lp;
  lp.num_vars = static_cast<int>(columns.size());
  lp.objective.assign(lp.num_vars, Rat(0));
  lp.want_farkas = true;
  for (VertexId v : constrained) {
    LpRow row;
    for (int f = 0; f < lp.num_vars; ++f) {
      if (std::binary_search(columns[f].protected_vertices.begin(),
                             columns[f].protected_vertices.end(), v)) {
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
    rep.feasible = true;
    for (int f = 0; f < lp.num_vars; ++f) {
      if (sol.x[f] > 0) {
        rep.distribution.support.push_back(columns[f]);
        rep.distribution.probabilities.push_back(sol.x[f]);
      }
    }
    rep.distribution.validate();
    return rep;
  }

  internal_check(sol.status == LpStatus::Infeasible, "plp oracle: unexpected LP status");
  rep.feasible = false;
  rep.certificate.y.assign(n, Rat(0));
  for (std::size_t i = 0; i < constrained.size(); ++i) {
    rep.certificate.y[constrained[i]] = sol.farkas[i];
  }
  rep.certificate.mu = -sol.farkas.back();
  Rat gap = -rep.certificate.mu;
  for (VertexId v : constrained) gap += spec.probabilities[v] * rep.certificate.y[v];
  internal_check(gap > 0, "plp oracle: certificate with non-positive value");
  for (Rat& y : rep.certificate.y) y /= gap;
  rep.certificate.mu /= gap;

  // Verify the certificate against every column.
  for (const CutSolution& cut : columns) {
    Rat mass = 0;
    for (VertexId v : cut.protected_vertices) mass += rep.certificate.y[v];
    internal_check(mass <= rep.certificate.mu, "plp oracle: certificate fails a column");
  }
  return rep;
}

}  // namespace faircut
