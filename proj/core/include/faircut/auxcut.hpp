#pragma once

#include <span>
#include <vector>

#include "faircut/demfair.hpp"
#include "faircut/embedding.hpp"
#include "faircut/graph.hpp"
#include "faircut/tree.hpp"

namespace faircut {

/// Budgeted protection instance: find a cut of cost at most budget saving at
/// least target vertices while maximizing the total protected vertex weight.
struct AuxCutInstance {
  WeightedGraph graph;
  Rat budget = 0;
  long target = 0;
  std::vector<Rat> vertex_weights;  // indexed by vertex id; weight of the source must be 0

  void validate() const;
};

/// Floor-scaling of edge costs: lambda = ceil(m/eps) / budget, discretized
/// cost floor(lambda * w_e), discretized budget B' = ceil(m/eps). Any cut of
/// original cost <= budget stays affordable; any affordable discretized cut
/// costs at most (1+eps) * budget originally.
struct DiscretizeResult {
  std::vector<long> costs;
  Rat lambda = 1;
  long budget = 0;  // B'
};

DiscretizeResult discretize_costs(std::span<const Rat> costs, const Rat& budget, const Rat& eps);

struct AuxOptions {
  /// Integer-cost instances skip discretization entirely when the budget fits
  /// this cap, making the tree solve exact (cost <= budget, value optimal).
  long exact_budget_cap = 200000;
};

struct AuxTreeResult {
  SolveStatus status = SolveStatus::Infeasible;
  TreeCut cut;
  Rat value = 0;   // total protected real weight
  bool exact = false;  // true when no discretization slack was taken
};

/// (1,1,1+eps)-bicriteria solve on a rooted tree: the returned cut costs at
/// most (1+eps)*budget, saves at least target real vertices, and its protected
/// weight is no less than the optimum of the exact-budget instance. Exact when
/// costs and budget are integers within the cap. Binarizes internally; weights
/// are indexed by real vertex id and never discretized.
AuxTreeResult auxcut_tree(const RootedTree& t, const Rat& budget, long target,
                          std::span<const Rat> vertex_weights, const Rat& eps,
                          const AuxOptions& opts = {});

struct AuxGeneralResult {
  SolveStatus status = SolveStatus::Infeasible;
  CutSolution cut;
  Rat value = 0;        // recomputed protected weight in the graph
  int chosen_tree = -1;
  Rat tree_budget = 0;  // certified_stretch * budget handed to each tree
};

/// General graphs: every embedding tree is solved at budget
/// certified_stretch * B; the best tree solution is lifted back through its
/// closed cut. Guarantees cost <= (1+eps) * certified_stretch * B, target met,
/// and value at least the optimum over cuts of original budget B.
AuxGeneralResult auxcut_general(const AuxCutInstance& inst, const TreeEmbedding& emb,
                                const Rat& eps, const AuxOptions& opts = {});

}  // namespace faircut
