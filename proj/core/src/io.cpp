#include "faircut/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "faircut/errors.hpp"

namespace faircut {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

WeightedGraph read_graph(std::istream& in, const std::string& name) {
  std::string line;
  long line_no = 0;
  long n = -1, m = -1, s = -1;
  WeightedGraph g;
  long edges_read = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string data = strip_comment(line);
    if (blank(data)) continue;
    std::istringstream row(data);
    if (n < 0) {
      if (!(row >> n >> m >> s)) {
        throw InputError(name + ":" + std::to_string(line_no) + ": expected header 'n m s'");
      }
      if (n < 1 || m < 0 || s < 0 || s >= n) {
        throw InputError(name + ":" + std::to_string(line_no) + ": invalid header values");
      }
      g = WeightedGraph(static_cast<int>(n), static_cast<VertexId>(s));
      continue;
    }
    long u, v;
    std::string cost_text;
    if (!(row >> u >> v >> cost_text)) {
      throw InputError(name + ":" + std::to_string(line_no) + ": expected edge 'u v cost'");
    }
    std::string trailing;
    if (row >> trailing) {
      throw InputError(name + ":" + std::to_string(line_no) + ": trailing tokens after edge");
    }
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw InputError(name + ":" + std::to_string(line_no) + ": endpoint out of range");
    }
    if (edges_read >= m) {
      throw InputError(name + ":" + std::to_string(line_no) + ": more edges than declared");
    }
    try {
      g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), parse_rational(cost_text));
    } catch (const InputError& err) {
      throw InputError(name + ":" + std::to_string(line_no) + ": " + err.what());
    }
    ++edges_read;
  }
  if (n < 0) throw InputError(name + ": empty graph file");
  if (edges_read != m) {
    throw InputError(name + ": declared " + std::to_string(m) + " edges, found " +
                     std::to_string(edges_read));
  }
  return g;
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  return read_graph(in, path);
}

std::string write_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.source() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ' << rat_to_string(e.cost) << '\n';
  }
  return out.str();
}

Json rat_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("expected a rational as \"p/q\" string or integer, got: " + j.dump());
}

DemographicSpec groups_from_json(const Json& j) {
  require(j.is_object() && j.contains("groups") && j["groups"].is_array(),
          "groups file must be {\"groups\": [...]}");
  DemographicSpec spec;
  for (const Json& grp : j["groups"]) {
    require(grp.contains("members") && grp["members"].is_array(),
            "each group needs a \"members\" array");
    require(grp.contains("fraction"), "each group needs a \"fraction\"");
    DemographicGroup out;
    for (const Json& v : grp["members"]) {
      require(v.is_number_integer(), "group members must be vertex ids");
      out.members.push_back(v.get<VertexId>());
    }
    out.fraction = rat_from_json(grp["fraction"]);
    spec.groups.push_back(std::move(out));
  }
  return spec;
}

Json groups_to_json(const DemographicSpec& spec) {
  Json groups = Json::array();
  for (const auto& grp : spec.groups) {
    groups.push_back({{"members", grp.members}, {"fraction", rat_json(grp.fraction)}});
  }
  return Json{{"groups", groups}};
}

ProtectionSpec protection_from_json(const Json& j, int num_vertices) {
  require(j.is_object() && j.contains("target"), "protection file needs a \"target\"");
  ProtectionSpec spec;
  spec.target = j["target"].get<long>();
  spec.probabilities.assign(num_vertices, Rat(0));
  if (j.contains("probabilities")) {
    require(j["probabilities"].is_object(), "\"probabilities\" must map ids to rationals");
    for (const auto& [key, value] : j["probabilities"].items()) {
      long v = std::stol(key);
      require(v >= 0 && v < num_vertices, "protection probability for unknown vertex " + key);
      spec.probabilities[v] = rat_from_json(value);
    }
  }
  return spec;
}

Json protection_to_json(const ProtectionSpec& spec) {
  Json probs = Json::object();
  for (std::size_t v = 0; v < spec.probabilities.size(); ++v) {
    if (spec.probabilities[v] != 0) probs[std::to_string(v)] = rat_json(spec.probabilities[v]);
  }
  return Json{{"target", spec.target}, {"probabilities", probs}};
}

std::vector<Rat> weights_from_json(const Json& j, int num_vertices) {
  const Json& map = j.is_object() && j.contains("vertex_weights") ? j["vertex_weights"] : j;
  require(map.is_object(), "vertex weights must be an id -> rational map");
  std::vector<Rat> weights(num_vertices, Rat(0));
  for (const auto& [key, value] : map.items()) {
    long v = std::stol(key);
    require(v >= 0 && v < num_vertices, "vertex weight for unknown vertex " + key);
    weights[v] = rat_from_json(value);
  }
  return weights;
}

Json cut_to_json(const WeightedGraph& g, const CutSolution& cut) {
  Json edges = Json::array();
  for (EdgeId e : cut.cut_edges) {
    const Edge& ed = g.edge(e);
    edges.push_back({{"id", e}, {"u", ed.u}, {"v", ed.v}, {"cost", rat_json(ed.cost)}});
  }
  return Json{{"edges", edges},
              {"cost", rat_json(cut.cost)},
              {"protected", cut.protected_vertices}};
}

Json tree_to_json(const RootedTree& t) {
  Json costs = Json::array();
  for (const Rat& c : t.edge_cost) costs.push_back(rat_json(c));
  return Json{{"root", t.root},
              {"parent", t.parent},
              {"edge_cost", costs},
              {"cuttable", std::vector<int>(t.edge_cuttable.begin(), t.edge_cuttable.end())},
              {"is_real", std::vector<int>(t.is_real.begin(), t.is_real.end())}};
}

RootedTree tree_from_json(const Json& j) {
  RootedTree t;
  t.root = j.at("root").get<VertexId>();
  t.parent = j.at("parent").get<std::vector<VertexId>>();
  for (const Json& c : j.at("edge_cost")) t.edge_cost.push_back(rat_from_json(c));
  for (int flag : j.at("cuttable").get<std::vector<int>>()) t.edge_cuttable.push_back(flag ? 1 : 0);
  for (int flag : j.at("is_real").get<std::vector<int>>()) t.is_real.push_back(flag ? 1 : 0);
  require(t.parent.size() == t.edge_cost.size() && t.parent.size() == t.edge_cuttable.size() &&
              t.parent.size() == t.is_real.size(),
          "tree arrays must have equal length");
  t.children.assign(t.parent.size(), {});
  for (VertexId v = 0; v < t.size(); ++v) {
    if (v == t.root) continue;
    require(t.parent[v] >= 0 && t.parent[v] < t.size(), "tree parent out of range");
    t.children[t.parent[v]].push_back(v);
  }
  t.validate();
  return t;
}

Json certification_to_json(const CertificationReport& rep) {
  Json violations = Json::array();
  for (const auto& v : rep.violations) {
    violations.push_back({{"subset", v.subset},
                          {"tree", v.tree_index},
                          {"graph_cut", rat_json(v.graph_cut)},
                          {"tree_cut", rat_json(v.tree_cut)}});
  }
  return Json{{"mode", rep.mode == CertifyMode::Exhaustive ? "exhaustive" : "sampled"},
              {"property1_ok", rep.property1_ok},
              {"violations", violations},
              {"c_embed", rat_json(rep.c_embed)},
              {"subsets_checked", rep.subsets_checked}};
}

CertificationReport certification_from_json(const Json& j) {
  CertificationReport rep;
  rep.mode = j.at("mode").get<std::string>() == "exhaustive" ? CertifyMode::Exhaustive
                                                             : CertifyMode::Sampled;
  rep.property1_ok = j.at("property1_ok").get<bool>();
  for (const Json& v : j.at("violations")) {
    PropertyViolation pv;
    pv.subset = v.at("subset").get<std::vector<VertexId>>();
    pv.tree_index = v.at("tree").get<int>();
    pv.graph_cut = rat_from_json(v.at("graph_cut"));
    pv.tree_cut = rat_from_json(v.at("tree_cut"));
    rep.violations.push_back(std::move(pv));
  }
  rep.c_embed = rat_from_json(j.at("c_embed"));
  rep.subsets_checked = j.at("subsets_checked").get<long>();
  return rep;
}

Json embedding_to_json(const TreeEmbedding& emb) {
  Json trees = Json::array();
  for (const RootedTree& t : emb.trees) trees.push_back(tree_to_json(t));
  Json lambdas = Json::array();
  for (const Rat& l : emb.multipliers) lambdas.push_back(rat_json(l));
  return Json{{"trees", trees},
              {"multipliers", lambdas},
              {"certified_stretch", rat_json(emb.certified_stretch)},
              {"certification", certification_to_json(emb.report)}};
}

TreeEmbedding embedding_from_json(const Json& j) {
  TreeEmbedding emb;
  for (const Json& t : j.at("trees")) emb.trees.push_back(tree_from_json(t));
  for (const Json& l : j.at("multipliers")) emb.multipliers.push_back(rat_from_json(l));
  emb.certified_stretch = rat_from_json(j.at("certified_stretch"));
  emb.report = certification_from_json(j.at("certification"));
  require(!emb.trees.empty() && emb.trees.size() == emb.multipliers.size(),
          "embedding arrays must align");
  Rat total = 0;
  for (const Rat& l : emb.multipliers) {
    require(l >= 0, "negative multiplier");
    total += l;
  }
  require(total == 1, "multipliers must sum to exactly 1");
  return emb;
}

Json distribution_to_json(const WeightedGraph& g, const CutDistribution& dist) {
  Json support = Json::array();
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    Json entry = cut_to_json(g, dist.support[i]);
    entry["probability"] = rat_json(dist.probabilities[i]);
    support.push_back(std::move(entry));
  }
  Json marginals = Json::object();
  std::vector<Rat> marg = dist.marginals(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (marg[v] != 0) marginals[std::to_string(v)] = rat_json(marg[v]);
  }
  return Json{{"support", support}, {"marginals", marginals}};
}

CutDistribution distribution_from_json(const WeightedGraph& g, const Json& j) {
  CutDistribution dist;
  for (const Json& entry : j.at("support")) {
    std::vector<EdgeId> ids;
    for (const Json& e : entry.at("edges")) ids.push_back(e.at("id").get<EdgeId>());
    dist.support.push_back(make_cut_solution(g, std::move(ids)));
    dist.probabilities.push_back(rat_from_json(entry.at("probability")));
  }
  dist.validate();
  return dist;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& err) {
    throw InputError(path + ": " + err.what());
  }
  return j;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw InputError("cannot move output into place: " + path);
  }
}

}  // namespace faircut
