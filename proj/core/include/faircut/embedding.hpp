#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "faircut/graph.hpp"
#include "faircut/tree.hpp"

namespace faircut {

/// How an embedding was certified. Exhaustive mode enumerates every subset
/// S of V \ {s}; sampled mode evaluates a seeded random selection and its
/// reported stretch is only an empirical lower bound.
enum class CertifyMode { Exhaustive, Sampled };

struct CertifySpec {
  CertifyMode mode = CertifyMode::Exhaustive;
  long sample_count = 2000;   // sampled mode only
  std::uint64_t seed = 0;     // sampled mode only
  int exhaustive_bound = 14;  // refuse exhaustive above this vertex count
};

struct PropertyViolation {
  std::vector<VertexId> subset;
  int tree_index = -1;
  Rat graph_cut = 0;
  Rat tree_cut = 0;
};

struct CertificationReport {
  CertifyMode mode = CertifyMode::Exhaustive;
  bool property1_ok = true;
  std::vector<PropertyViolation> violations;
  /// Tight max over checked subsets of sum_i lambda_i w^i(delta_i(S)) / w(delta(S)).
  Rat c_embed = 1;
  long subsets_checked = 0;
};

/// A convex collection of rooted trees dominating the cuts of a graph:
/// every tree cut separating S from the root costs at least w(delta(S)), and
/// the lambda-average of the tree cuts stays within certified_stretch of
/// w(delta(S)). Auxiliary interior vertices are marked non-real. Immutable.
struct TreeEmbedding {
  std::vector<RootedTree> trees;  // per-tree weights live on tree edges
  std::vector<Rat> multipliers;   // non-negative, sum exactly 1
  Rat certified_stretch = 1;      // C_embed
  CertificationReport report;
};

struct EmbedConfig {
  int num_trees = 0;           // 0 -> ceil(log2 n) + 1
  std::uint64_t seed = 0;
  int exhaustive_bound = 14;   // subset enumeration bound (on n)
  long sample_count = 2000;    // used above the bound
  int exact_partition_bound = 14;  // ratio-cut by enumeration up to this cluster size
};

/// Minimum cost of a tree edge set whose removal separates every vertex of
/// s_real from the root while keeping every other real vertex root-side;
/// auxiliary vertices fall on whichever side is cheaper. This is the tree-cut
/// value w^i(delta_i(S)) used throughout certification: minimizing over the
/// auxiliary assignment makes the per-tree domination property imply, per
/// instance, the full cost chain of the general-graph reductions.
Rat tree_cut_value(const RootedTree& t, std::span<const VertexId> s_real);

/// Builds a certified embedding. Tree inputs return the identity embedding
/// (k = 1, multiplier 1, stretch exactly 1). Requires g connected.
TreeEmbedding build_embedding(const WeightedGraph& g, const EmbedConfig& cfg = {});

CertificationReport certify(const WeightedGraph& g, const TreeEmbedding& emb,
                            const CertifySpec& spec = {});

/// Lifts a tree cut back to the graph: takes the real protected set X of the
/// tree cut and returns the closed cut delta(X), whose protected set contains X.
CutSolution tree_cut_to_graph_cut(const WeightedGraph& g, const RootedTree& tree,
                                  const TreeCut& cut);

}  // namespace faircut
