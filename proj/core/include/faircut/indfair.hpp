#pragma once

#include <cstdint>
#include <vector>

#include "faircut/auxcut.hpp"
#include "faircut/embedding.hpp"
#include "faircut/graph.hpp"

namespace faircut {

/// Per-vertex protection probabilities plus the global save target.
struct ProtectionSpec {
  std::vector<Rat> probabilities;  // indexed by vertex id; source slot must be 0
  long target = 0;

  void validate(const WeightedGraph& g) const;
};

/// Candidate dual point for the budget-B dual polytope: y >= 0 per non-source
/// vertex and a free threshold mu. Points extracted from Farkas certificates
/// are normalized so that sum_v p_v y_v = mu + 1.
struct DualPoint {
  std::vector<Rat> y;  // indexed by vertex id; source slot 0
  Rat mu = 0;
};

/// Finitely supported distribution over cut solutions. Probabilities sum to
/// exactly 1; marginals are recomputable from the support.
struct CutDistribution {
  std::vector<CutSolution> support;
  std::vector<Rat> probabilities;

  std::vector<Rat> marginals(int num_vertices) const;
  void validate() const;
};

struct SeparationResult {
  bool membership = false;  // (y, mu) certified inside the dual polytope
  bool vacuous = false;     // certified because no affordable cut attains the target
  CutSolution violating_cut;  // set when membership is false
  Rat violation_value = 0;    // y(protected) of the violating cut
};

/// Runs the budgeted-protection solver with vertex weights y. A cut whose
/// protected y-mass exceeds mu is a violated constraint and lies in the
/// inflated budget class F((1+eps) * certified_stretch * B); otherwise every
/// cut of F(B) satisfies y(prot) <= mu and membership is certified.
SeparationResult separate(const WeightedGraph& g, long target, const Rat& budget,
                          const DualPoint& point, const TreeEmbedding& emb, const Rat& eps);

enum class RoundStatus { Feasible, Infeasible, Unresolved };

struct IndFairOptions {
  Rat aux_eps = Rat(1, 8);       // epsilon fed to the separation solver
  long iteration_cap_factor = 50;  // oracle-call cap per budget = factor * n
  long max_grid = 4096;            // refusal bound on the budget grid size
};

struct FeasibilityOutcome {
  RoundStatus status = RoundStatus::Unresolved;
  CutDistribution distribution;  // set when Feasible
  long oracle_calls = 0;
  bool vacuous = false;  // Infeasible because the target is unattainable at the budget
};

/// Round-or-cut at one budget: grow a support of generated cuts; a feasible
/// restricted distribution LP yields a basic solution (support <= n), an
/// infeasible one yields a normalized Farkas dual point handed to separate().
/// A membership certificate proves the distribution LP infeasible at budget B.
FeasibilityOutcome feasibility_round(const WeightedGraph& g, const ProtectionSpec& spec,
                                     const Rat& budget, const TreeEmbedding& emb,
                                     const IndFairOptions& opts = {});

/// Geometric budget candidates: {0} then min positive cost times (1+eps)^j,
/// capped and topped off with w(E).
std::vector<Rat> budget_grid(const WeightedGraph& g, const Rat& eps, long max_grid = 4096);

struct SweepEntry {
  Rat budget = 0;
  RoundStatus status = RoundStatus::Unresolved;
  long oracle_calls = 0;
};

struct IndFairResult {
  RoundStatus status = RoundStatus::Infeasible;
  Rat b_final = 0;
  CutDistribution distribution;
  Rat class_factor = 1;  // (1 + aux_eps) * certified_stretch
  std::vector<SweepEntry> sweep;
  long oracle_calls = 0;
};

/// Ascending sweep over the budget grid; returns the first budget whose
/// feasibility round produces a distribution. full_sweep keeps probing past
/// the first success (used by tests to examine the whole trace).
IndFairResult indfair_solve(const WeightedGraph& g, const ProtectionSpec& spec, const Rat& eps,
                            const TreeEmbedding* emb, std::uint64_t seed,
                            const IndFairOptions& opts = {}, bool full_sweep = false,
                            const EmbedConfig& embed_cfg = {});

/// Draws a support element with its declared probability; deterministic for a
/// fixed seed.
CutSolution sample_cut(const CutDistribution& dist, std::uint64_t seed);
std::size_t sample_index(const CutDistribution& dist, std::mt19937_64& rng);

}  // namespace faircut
