#pragma once

#include <vector>

#include "faircut/auxcut.hpp"
#include "faircut/demfair.hpp"
#include "faircut/graph.hpp"
#include "faircut/indfair.hpp"

namespace faircut {

/// Brute-force reference solvers. Enumeration runs over vertex subsets
/// S of V \ {s} rather than edge subsets: any feasible cut F is dominated by
/// the closed cut delta(prot(F)), so the subset optimum is exact.
struct OracleOptions {
  int max_n = 16;      // subset enumeration bound
  int max_n_plp = 10;  // distribution-LP bound (up to 2^(n-1) columns)
};

struct OracleReport {
  bool feasible = false;
  Rat optimum = 0;                    // min cost (cut problems) or max value (auxcut)
  std::vector<VertexId> witness_set;  // S achieving the optimum
  CutSolution witness_cut;            // delta(S)
  long enumerated = 0;
};

/// min w(delta(S)) over |S| >= target.
OracleReport oracle_sbmincc(const WeightedGraph& g, long target, const OracleOptions& = {});

/// min w(delta(S)) over S meeting every group coverage threshold exactly.
OracleReport oracle_demfair(const WeightedGraph& g, const DemographicSpec& spec,
                            const OracleOptions& = {});

/// max a(S) over |S| >= target with w(delta(S)) <= budget.
OracleReport oracle_auxcut(const AuxCutInstance& inst, const OracleOptions& = {});

struct PlpOracleReport {
  bool feasible = false;
  CutDistribution distribution;  // exact distribution when feasible
  DualPoint certificate;         // normalized point of the dual polytope otherwise
  long columns = 0;
};

/// Exact feasibility of the distribution LP at a budget: columns are all
/// affordable target-saving closed cuts; infeasibility returns a verified
/// Farkas point (y, mu) with sum p_v y_v = mu + 1 and y(prot(F)) <= mu for
/// every column.
PlpOracleReport oracle_plp_feasible(const WeightedGraph& g, const ProtectionSpec& spec,
                                    const Rat& budget, const OracleOptions& = {});

}  // namespace faircut
