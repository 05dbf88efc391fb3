// faircut: fair graph-cut solvers over a common command line.
//
// Subcommands: sbmincc, demfair, indfair, auxcut, embed, oracle, sample.
// Results are emitted as JSON on stdout (and optionally to --out, written
// atomically). Exit codes: 0 success, 2 infeasible/unresolved result,
// 1 input or usage error. Fixed inputs and seed reproduce identical bytes.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "faircut/errors.hpp"
#include "faircut/io.hpp"
#include "faircut/oracle.hpp"
#include "faircut/rng.hpp"

namespace {

using namespace faircut;

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
  std::string graph_path;
  std::string out_path;
  std::string embedding = "build";
  std::string epsilon = "1/4";
  std::uint64_t seed = 0;
  int max_n = 0;  // 0 = library defaults
  int trees = 0;
};

int emit(const Json& result, const std::string& out_path, int exit_code) {
  std::string text = result.dump(2);
  text.push_back('\n');
  std::cout << text;
  if (!out_path.empty()) write_text_atomic(out_path, text);
  return exit_code;
}

Json base_result(const std::string& command, std::uint64_t seed) {
  return Json{{"command", command}, {"version", kVersion}, {"seed", seed}};
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok: return "ok";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::RetryCapExceeded: return "retry_cap_exceeded";
  }
  return "unknown";
}

const char* status_name(RoundStatus s) {
  switch (s) {
    case RoundStatus::Feasible: return "ok";
    case RoundStatus::Infeasible: return "infeasible";
    case RoundStatus::Unresolved: return "unresolved";
  }
  return "unknown";
}

TreeEmbedding resolve_embedding(const WeightedGraph& g, const CommonArgs& args) {
  if (args.embedding == "build") {
    EmbedConfig cfg;
    cfg.seed = derive_seed(args.seed, "embedding");
    if (args.trees > 0) cfg.num_trees = args.trees;
    if (args.max_n > 0) cfg.exhaustive_bound = args.max_n;
    return build_embedding(g, cfg);
  }
  return embedding_from_json(load_json_file(args.embedding));
}

Json embedding_summary(const TreeEmbedding& emb) {
  return Json{{"trees", emb.trees.size()},
              {"certified_stretch", rat_json(emb.certified_stretch)},
              {"mode", emb.report.mode == CertifyMode::Exhaustive ? "exhaustive" : "sampled"},
              {"c_embed", rat_json(emb.report.c_embed)}};
}

Json groups_report(const DemographicSpec& spec, const std::vector<long>& protected_counts) {
  Json arr = Json::array();
  for (std::size_t h = 0; h < spec.groups.size(); ++h) {
    arr.push_back({{"size", spec.groups[h].members.size()},
                   {"fraction", rat_json(spec.groups[h].fraction)},
                   {"required", spec.required_count(static_cast<int>(h))},
                   {"protected", h < protected_counts.size() ? protected_counts[h] : 0}});
  }
  return arr;
}

int run_demfair_like(const std::string& command, const CommonArgs& args,
                     const DemographicSpec& spec, const std::string& method) {
  require(method == "dp" || method == "lp", "--method must be 'dp' or 'lp'");
  WeightedGraph g = read_graph_file(args.graph_path);
  spec.validate_for_graph(g);
  TreeEmbedding emb = resolve_embedding(g, args);
  const Rat eps = parse_rational(args.epsilon);
  GeneralDemFairResult res =
      demfair_general(g, spec, method == "dp" ? DemFairMethod::Dp : DemFairMethod::Lp, &emb,
                      eps, args.seed);

  Json out = base_result(command, args.seed);
  out["status"] = status_name(res.status);
  out["method"] = Json{{"name", method},
                       {"epsilon", method == "lp" ? Json(rat_to_string(eps)) : Json(nullptr)},
                       {"repetitions", res.repetitions},
                       {"retries", res.retries},
                       {"lp_objective", rat_json(res.lp_objective)}};
  out["embedding"] = embedding_summary(emb);
  if (res.status != SolveStatus::Infeasible) {
    out["cut"] = cut_to_json(g, res.cut);
    out["chosen_tree"] = res.chosen_tree;
    out["groups"] = groups_report(spec, res.group_protected);
  }
  return emit(out, args.out_path, res.status == SolveStatus::Ok ? 0 : 2);
}

DemographicSpec whole_graph_spec(const WeightedGraph& g, long target) {
  DemographicSpec spec;
  DemographicGroup grp;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (v != g.source()) grp.members.push_back(v);
  }
  grp.fraction = Rat(target) / static_cast<long>(grp.members.size());
  spec.groups.push_back(std::move(grp));
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair graph-cut solvers (SB-MinCC, DemFairCut, IndFairCut, AuxCut)"};
  app.require_subcommand(1);

  CommonArgs args;
  long target = 0;
  std::string groups_path, protection_path, weights_path, budget_text, method = "dp";
  std::string distribution_path;
  long sample_count = 1;

  auto add_common = [&](CLI::App* cmd, bool with_embedding = true) {
    cmd->add_option("--graph", args.graph_path, "graph file (n m s header, then u v cost lines)")
        ->required();
    cmd->add_option("--out", args.out_path, "write the JSON result to this file as well");
    cmd->add_option("--seed", args.seed, "master seed; all randomness derives from it");
    cmd->add_option("--epsilon", args.epsilon, "epsilon as p/q or decimal");
    cmd->add_option("--max-n", args.max_n, "override exhaustive-enumeration bounds");
    if (with_embedding) {
      cmd->add_option("--embedding", args.embedding, "'build' or a path to an embedding JSON");
      cmd->add_option("--trees", args.trees, "number of embedding trees to build");
    }
  };

  CLI::App* sb = app.add_subcommand("sbmincc", "minimum-cost cut saving at least --target vertices");
  add_common(sb);
  sb->add_option("--target", target, "number of vertices to save")->required();
  sb->add_option("--method", method, "dp (exact per tree) or lp (rounding)");

  CLI::App* dem = app.add_subcommand("demfair", "minimum-cost cut with per-group coverage");
  add_common(dem);
  dem->add_option("--groups", groups_path, "demographics JSON")->required();
  dem->add_option("--method", method, "dp (exact per tree) or lp (rounding)");

  CLI::App* aux = app.add_subcommand("auxcut", "budgeted max-weight protection");
  add_common(aux);
  aux->add_option("--budget", budget_text, "budget as p/q or decimal")->required();
  aux->add_option("--target", target, "minimum vertices to save")->required();
  aux->add_option("--weights", weights_path, "vertex weight JSON")->required();

  CLI::App* ind = app.add_subcommand("indfair", "cheapest budget with per-vertex protection odds");
  add_common(ind);
  ind->add_option("--protection", protection_path, "protection spec JSON")->required();

  CLI::App* embed = app.add_subcommand("embed", "build and certify a tree embedding");
  add_common(embed, false);
  embed->add_option("--trees", args.trees, "number of trees");

  CLI::App* oracle = app.add_subcommand("oracle", "exact brute-force reference solvers");
  oracle->require_subcommand(1);
  CLI::App* osb = oracle->add_subcommand("sbmincc", "exact SB-MinCC");
  CLI::App* odem = oracle->add_subcommand("demfair", "exact DemFairCut");
  CLI::App* oaux = oracle->add_subcommand("auxcut", "exact AuxCut");
  CLI::App* oplp = oracle->add_subcommand("plp", "exact distribution-LP feasibility");
  for (CLI::App* cmd : {osb, odem, oaux, oplp}) {
    cmd->add_option("--graph", args.graph_path)->required();
    cmd->add_option("--out", args.out_path);
    cmd->add_option("--max-n", args.max_n);
  }
  osb->add_option("--target", target)->required();
  odem->add_option("--groups", groups_path)->required();
  oaux->add_option("--budget", budget_text)->required();
  oaux->add_option("--target", target)->required();
  oaux->add_option("--weights", weights_path)->required();
  oplp->add_option("--protection", protection_path)->required();
  oplp->add_option("--budget", budget_text)->required();

  CLI::App* sample = app.add_subcommand("sample", "draw cuts from a stored distribution");
  sample->add_option("--graph", args.graph_path)->required();
  sample->add_option("--distribution", distribution_path, "JSON produced by indfair")->required();
  sample->add_option("--seed", args.seed);
  sample->add_option("--count", sample_count, "number of draws");
  sample->add_option("--out", args.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // --help exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // usage errors exit 1 regardless of CLI11's own code
  }

  try {
    if (sb->parsed()) {
      WeightedGraph g = read_graph_file(args.graph_path);
      require(target >= 0 && target <= g.num_vertices() - 1, "target must lie in [0, n-1]");
      if (target == 0) {
        Json out = base_result("sbmincc", args.seed);
        out["status"] = "ok";
        out["cut"] = cut_to_json(g, make_cut_solution(g, {}));
        return emit(out, args.out_path, 0);
      }
      return run_demfair_like("sbmincc", args, whole_graph_spec(g, target), method);
    }

    if (dem->parsed()) {
      DemographicSpec spec = groups_from_json(load_json_file(groups_path));
      return run_demfair_like("demfair", args, spec, method);
    }

    if (aux->parsed()) {
      AuxCutInstance inst;
      inst.graph = read_graph_file(args.graph_path);
      inst.budget = parse_rational(budget_text);
      inst.target = target;
      inst.vertex_weights =
          weights_from_json(load_json_file(weights_path), inst.graph.num_vertices());
      inst.validate();
      TreeEmbedding emb = resolve_embedding(inst.graph, args);
      AuxGeneralResult res = auxcut_general(inst, emb, parse_rational(args.epsilon));
      Json out = base_result("auxcut", args.seed);
      out["status"] = status_name(res.status);
      out["embedding"] = embedding_summary(emb);
      out["tree_budget"] = rat_json(res.tree_budget);
      if (res.status == SolveStatus::Ok) {
        out["cut"] = cut_to_json(inst.graph, res.cut);
        out["value"] = rat_json(res.value);
        out["chosen_tree"] = res.chosen_tree;
      }
      return emit(out, args.out_path, res.status == SolveStatus::Ok ? 0 : 2);
    }

    if (ind->parsed()) {
      WeightedGraph g = read_graph_file(args.graph_path);
      ProtectionSpec spec = protection_from_json(load_json_file(protection_path),
                                                 g.num_vertices());
      TreeEmbedding emb = resolve_embedding(g, args);
      IndFairResult res =
          indfair_solve(g, spec, parse_rational(args.epsilon), &emb, args.seed);
      Json out = base_result("indfair", args.seed);
      out["status"] = status_name(res.status);
      out["embedding"] = embedding_summary(emb);
      out["class_factor"] = rat_json(res.class_factor);
      out["oracle_calls"] = res.oracle_calls;
      Json sweep = Json::array();
      for (const SweepEntry& entry : res.sweep) {
        sweep.push_back({{"budget", rat_json(entry.budget)},
                         {"status", status_name(entry.status)},
                         {"oracle_calls", entry.oracle_calls}});
      }
      out["sweep"] = sweep;
      if (res.status == RoundStatus::Feasible) {
        out["b_final"] = rat_json(res.b_final);
        out["distribution"] = distribution_to_json(g, res.distribution);
      }
      return emit(out, args.out_path, res.status == RoundStatus::Feasible ? 0 : 2);
    }

    if (embed->parsed()) {
      WeightedGraph g = read_graph_file(args.graph_path);
      EmbedConfig cfg;
      cfg.seed = derive_seed(args.seed, "embedding");
      if (args.trees > 0) cfg.num_trees = args.trees;
      if (args.max_n > 0) cfg.exhaustive_bound = args.max_n;
      TreeEmbedding emb = build_embedding(g, cfg);
      Json out = base_result("embed", args.seed);
      out["status"] = "ok";
      out["embedding"] = embedding_to_json(emb);
      return emit(out, args.out_path, 0);
    }

    if (oracle->parsed()) {
      WeightedGraph g = read_graph_file(args.graph_path);
      OracleOptions opts;
      if (args.max_n > 0) {
        opts.max_n = args.max_n;
        opts.max_n_plp = args.max_n;
      }
      Json out = base_result("oracle", 0);
      auto fill_report = [&](const char* problem, const OracleReport& rep) {
        out["problem"] = problem;
        out["status"] = rep.feasible ? "ok" : "infeasible";
        out["enumerated"] = rep.enumerated;
        if (rep.feasible) {
          out["optimum"] = rat_json(rep.optimum);
          out["witness_set"] = rep.witness_set;
          out["witness_cut"] = cut_to_json(g, rep.witness_cut);
        }
        return rep.feasible ? 0 : 2;
      };
      if (osb->parsed()) {
        return emit(out, args.out_path, fill_report("sbmincc", oracle_sbmincc(g, target, opts)));
      }
      if (odem->parsed()) {
        DemographicSpec spec = groups_from_json(load_json_file(groups_path));
        return emit(out, args.out_path, fill_report("demfair", oracle_demfair(g, spec, opts)));
      }
      if (oaux->parsed()) {
        AuxCutInstance inst;
        inst.graph = g;
        inst.budget = parse_rational(budget_text);
        inst.target = target;
        inst.vertex_weights = weights_from_json(load_json_file(weights_path), g.num_vertices());
        return emit(out, args.out_path, fill_report("auxcut", oracle_auxcut(inst, opts)));
      }
      // plp
      ProtectionSpec spec = protection_from_json(load_json_file(protection_path),
                                                 g.num_vertices());
      PlpOracleReport rep = oracle_plp_feasible(g, spec, parse_rational(budget_text), opts);
      out["problem"] = "plp";
      out["status"] = rep.feasible ? "ok" : "infeasible";
      out["columns"] = rep.columns;
      if (rep.feasible) {
        out["distribution"] = distribution_to_json(g, rep.distribution);
      } else {
        Json y = Json::object();
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
          if (rep.certificate.y[v] != 0) y[std::to_string(v)] = rat_json(rep.certificate.y[v]);
        }
        out["certificate"] = Json{{"y", y}, {"mu", rat_json(rep.certificate.mu)}};
      }
      return emit(out, args.out_path, rep.feasible ? 0 : 2);
    }

    if (sample->parsed()) {
      WeightedGraph g = read_graph_file(args.graph_path);
      Json stored = load_json_file(distribution_path);
      const Json& dist_json = stored.contains("distribution") ? stored["distribution"] : stored;
      CutDistribution dist = distribution_from_json(g, dist_json);
      Json out = base_result("sample", args.seed);
      out["status"] = "ok";
      Json draws = Json::array();
      std::mt19937_64 rng(derive_seed(args.seed, "sample-cut"));
      for (long i = 0; i < sample_count; ++i) {
        draws.push_back(cut_to_json(g, dist.support[sample_index(dist, rng)]));
      }
      out["draws"] = draws;
      return emit(out, args.out_path, 0);
    }
  } catch (const RefusalError& err) {
    std::cerr << "refused: " << err.what() << '\n';
    return 1;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 1;
  }
  return 1;
}
