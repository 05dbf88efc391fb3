#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "faircut/embedding.hpp"
#include "faircut/graph.hpp"
#include "faircut/tree.hpp"

namespace faircut {

struct DemographicGroup {
  std::vector<VertexId> members;  // real vertices, never the source
  Rat fraction;                   // f_h in (0, 1]
};

/// Demographic groups with coverage fractions. Vertices may belong to several
/// groups. A cut is feasible when it protects at least fraction * |group|
/// members of every group, compared with exact rationals: for an integer
/// count that is count >= ceil(fraction * |group|).
struct DemographicSpec {
  std::vector<DemographicGroup> groups;

  int num_groups() const { return static_cast<int>(groups.size()); }
  Rat min_fraction() const;
  /// Smallest protected count satisfying group h.
  long required_count(int h) const;

  void validate_for_graph(const WeightedGraph& g) const;
  void validate_for_tree(const RootedTree& t) const;
};

enum class SolveStatus { Ok, Infeasible, RetryCapExceeded };

struct TreeDemFairResult {
  SolveStatus status = SolveStatus::Infeasible;
  TreeCut cut;
  std::vector<long> group_protected;
  // LP-path metadata (zero for the DP path)
  long repetitions = 0;
  long retries = 0;
  Rat lp_objective = 0;
};

struct DemFairOptions {
  /// DP refusal threshold: estimated table entries (~2 GiB at default).
  long long max_table_entries = 24000000;
  long retry_cap = 64;
  long markov_constant = 4;  // cost acceptance: w(F) <= c * N * lp_objective
};

/// Exact minimum-cost fair cut on a binarized tree via the sparse count-vector
/// dynamic program. Refuses instances whose table estimate exceeds the budget.
TreeDemFairResult demfair_tree_dp(const RootedTree& t, const DemographicSpec& spec,
                                  const DemFairOptions& opts = {});

struct FractionalCut {
  std::vector<Rat> x;  // per tree edge (indexed by child id); root slot 0
  std::vector<Rat> y;  // per vertex: sum of x over the root path
  Rat objective = 0;
};

struct LpSolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  FractionalCut fractional;
};

/// Optimal solution of the path-based relaxation: min sum w_e x_e subject to
/// y_v = x(P(s,v)) <= 1 and sum_{v in group} y_v >= fraction * |group|.
/// Exact rational; binarization not required.
LpSolveOutcome demfair_lp_solve(const RootedTree& t, const DemographicSpec& spec);

/// One pass of dependent rounding: edges in non-decreasing root-path length
/// (ties by child id); an edge with no chosen ancestor and x(P_e) < 1 is cut
/// with probability x_e / (1 - x(P_e)). At most one cut edge per root-to-leaf
/// path, and Pr[edge e cut] is exactly x_e.
TreeCut round_once(const RootedTree& t, const FractionalCut& frac, std::mt19937_64& rng);

/// Repetition count N = ceil(10 * beta * ln(gamma) / (eps^2 * min_f)) with
/// beta = 2 and ln(gamma) replaced by 1 when gamma = 1; at least 1.
long demfair_repetition_count(int gamma, const Rat& eps, const Rat& min_fraction);

/// Union of N independent rounding passes, retried with fresh seeds until the
/// cut protects >= (1-eps) * fraction * |group| of every group at cost at most
/// markov_constant * N * (LP objective). Gives up after opts.retry_cap tries,
/// returning the best attempt.
TreeDemFairResult demfair_lp_round(const RootedTree& t, const DemographicSpec& spec,
                                   const Rat& eps, std::uint64_t seed,
                                   const DemFairOptions& opts = {});

enum class DemFairMethod { Dp, Lp };

struct GeneralDemFairResult {
  SolveStatus status = SolveStatus::Infeasible;
  CutSolution cut;
  std::vector<long> group_protected;
  int chosen_tree = -1;
  std::vector<Rat> tree_costs;  // w(delta(X_i)) per embedding tree
  long repetitions = 0;
  long retries = 0;
  Rat lp_objective = 0;
  Rat certified_stretch = 1;
};

/// General graphs: solve on every embedding tree, lift each solution X_i to
/// the closed cut delta(X_i), keep the cheapest. Coverage is exact for the DP
/// method and (1-eps)-approximate for the LP method. When emb is null an
/// embedding is built from the graph (identity when the graph is a tree).
GeneralDemFairResult demfair_general(const WeightedGraph& g, const DemographicSpec& spec,
                                     DemFairMethod method, const TreeEmbedding* emb,
                                     const Rat& eps, std::uint64_t seed,
                                     const DemFairOptions& opts = {},
                                     const EmbedConfig& embed_cfg = {});

}  // namespace faircut
