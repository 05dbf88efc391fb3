#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "faircut/auxcut.hpp"
#include "faircut/demfair.hpp"
#include "faircut/embedding.hpp"
#include "faircut/graph.hpp"
#include "faircut/indfair.hpp"

namespace faircut {

using Json = nlohmann::json;

/// Graph text format: comments start with '#'; the first data line is
/// "n m s"; then m lines "u v cost" with cost an integer, decimal or "p/q".
/// Vertex ids are 0..n-1. Parse failures carry a line diagnostic.
WeightedGraph read_graph(std::istream& in, const std::string& name);
WeightedGraph read_graph_file(const std::string& path);
std::string write_graph(const WeightedGraph& g);

Json rat_json(const Rat& q);
Rat rat_from_json(const Json& j);

/// {"groups": [{"members": [ids], "fraction": "p/q"}]}
DemographicSpec groups_from_json(const Json& j);
Json groups_to_json(const DemographicSpec& spec);

/// {"target": T, "probabilities": {"id": "p/q", ...}}; missing vertices get 0.
ProtectionSpec protection_from_json(const Json& j, int num_vertices);
Json protection_to_json(const ProtectionSpec& spec);

/// Either a bare map {"id": "p/q"} or {"vertex_weights": {...}}.
std::vector<Rat> weights_from_json(const Json& j, int num_vertices);

Json cut_to_json(const WeightedGraph& g, const CutSolution& cut);

Json tree_to_json(const RootedTree& t);
RootedTree tree_from_json(const Json& j);

Json certification_to_json(const CertificationReport& rep);
CertificationReport certification_from_json(const Json& j);

Json embedding_to_json(const TreeEmbedding& emb);
TreeEmbedding embedding_from_json(const Json& j);

Json distribution_to_json(const WeightedGraph& g, const CutDistribution& dist);
/// Rebuilds support cuts from edge ids, revalidating cost and protected sets.
CutDistribution distribution_from_json(const WeightedGraph& g, const Json& j);

Json load_json_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace faircut
