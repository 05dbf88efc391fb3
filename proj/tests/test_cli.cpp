// End-to-end checks of the faircut binary: exit codes, JSON shape, schema
// conformance, and byte-level determinism.
// Invoked as: test_cli <path-to-faircut> [schema-dir].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "common/schema_check.hpp"

using nlohmann::json;

namespace {

int failures = 0;
std::string schema_dir;

void check_schema(const json& value, const std::string& schema_file, const std::string& what) {
  if (schema_dir.empty()) return;
  std::ifstream in(schema_dir + "/" + schema_file);
  if (!in) {
    ++failures;
    std::cerr << "FAIL: cannot open schema " << schema_file << '\n';
    return;
  }
  json schema = json::parse(in, nullptr, false);
  std::string err;
  if (!faircut::testing::schema_check(schema, value, err)) {
    ++failures;
    std::cerr << "FAIL: " << what << " does not match " << schema_file << ": " << err << '\n';
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAIL: " << what << '\n';
  }
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& command) {
  RunResult res;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return res;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) res.out.append(buffer, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <faircut-binary> [schema-dir]\n";
    return 2;
  }
  const std::string cli = argv[1];
  if (argc > 2) schema_dir = argv[2];
  const std::string dir = "cli_test_tmp";
  std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());

  write_file(dir + "/g1.txt",
             "4 4 0\n"
             "0 1 1\n"
             "0 2 2\n"
             "1 2 1\n"
             "2 3 3\n");
  write_file(dir + "/t1.txt",
             "4 3 0\n"
             "0 1 1\n"
             "0 2 2\n"
             "2 3 3\n");
  write_file(dir + "/groups.json", R"({"groups":[{"members":[1,2,3],"fraction":"1"}]})");
  write_file(dir + "/weights.json", R"({"1":"1","2":"5","3":"2"})");
  write_file(dir + "/prot.json", R"({"target":3,"probabilities":{"1":"1","2":"1","3":"1"}})");

  // sbmincc --target 2 solves via the single-group reduction; oracle value 3
  {
    RunResult r = run(cli + " sbmincc --graph " + dir + "/g1.txt --target 2 --seed 5");
    check(r.exit_code == 0, "sbmincc exit code");
    json j = json::parse(r.out, nullptr, false);
    check(!j.is_discarded(), "sbmincc emits JSON");
    check(j["cut"]["cost"] == "3", "sbmincc cost is 3");
    check(j["seed"] == 5, "seed is echoed");
    check(j["status"] == "ok", "sbmincc status ok");
    check_schema(j, "solve_result.schema.json", "sbmincc output");
  }

  // determinism: identical seeds and inputs give identical bytes
  {
    const std::string cmd =
        cli + " demfair --graph " + dir + "/g1.txt --groups " + dir + "/groups.json --seed 11";
    RunResult a = run(cmd);
    RunResult b = run(cmd);
    check(a.exit_code == 0 && b.exit_code == 0, "demfair runs");
    check(a.out == b.out && !a.out.empty(), "demfair output is byte-identical across runs");
    check_schema(json::parse(a.out, nullptr, false), "solve_result.schema.json",
                 "demfair output");
  }

  // oracle auxcut example: optimum 8
  {
    RunResult r = run(cli + " oracle auxcut --graph " + dir + "/t1.txt --budget 3 --target 2" +
                      " --weights " + dir + "/weights.json");
    check(r.exit_code == 0, "oracle auxcut exit code");
    json j = json::parse(r.out, nullptr, false);
    check(j["optimum"] == "8", "oracle auxcut optimum 8");
    check_schema(j, "oracle_report.schema.json", "oracle output");
  }

  // infeasible results exit 2
  {
    RunResult r = run(cli + " oracle auxcut --graph " + dir + "/t1.txt --budget 0 --target 2" +
                      " --weights " + dir + "/weights.json");
    check(r.exit_code == 2, "infeasible oracle exits 2");
  }

  // malformed files and usage errors exit 1; --help exits 0
  {
    write_file(dir + "/bad.txt", "not a graph\n");
    RunResult r = run(cli + " sbmincc --graph " + dir + "/bad.txt --target 1");
    check(r.exit_code == 1, "malformed graph exits 1");
    check(run(cli + " sbmincc").exit_code == 1, "missing required option exits 1");
    check(run(cli + " no-such-command").exit_code == 1, "unknown subcommand exits 1");
    check(run(cli + " --help >/dev/null").exit_code == 0, "--help exits 0");
  }

  // indfair end-to-end plus sampling from its emitted distribution
  {
    const std::string out_path = dir + "/ind.json";
    RunResult r = run(cli + " indfair --graph " + dir + "/g1.txt --protection " + dir +
                      "/prot.json --epsilon 1/4 --seed 9 --out " + out_path);
    check(r.exit_code == 0, "indfair exit code");
    json j = json::parse(r.out, nullptr, false);
    check(j.contains("b_final"), "indfair reports b_final");
    check(j.contains("sweep") && j["sweep"].is_array(), "indfair reports the sweep trace");
    check_schema(j, "indfair_result.schema.json", "indfair output");

    RunResult s1 = run(cli + " sample --graph " + dir + "/g1.txt --distribution " + out_path +
                       " --seed 4 --count 3");
    RunResult s2 = run(cli + " sample --graph " + dir + "/g1.txt --distribution " + out_path +
                       " --seed 4 --count 3");
    check(s1.exit_code == 0, "sample exit code");
    check(s1.out == s2.out, "sampling is deterministic per seed");
    json sj = json::parse(s1.out, nullptr, false);
    check(sj["draws"].size() == 3, "sample draw count");
    check_schema(sj, "sample_result.schema.json", "sample output");
  }

  // embed emits an importable embedding that solvers accept
  {
    const std::string emb_path = dir + "/emb.json";
    RunResult r = run(cli + " embed --graph " + dir + "/g1.txt --seed 2 --out " + emb_path);
    check(r.exit_code == 0, "embed exit code");
    json stored = json::parse(std::ifstream(emb_path), nullptr, false);
    check(stored["embedding"]["certification"]["property1_ok"] == true,
          "embedding certifies property 1");
    check_schema(stored, "embed_result.schema.json", "embed output");
    check_schema(stored["embedding"], "embedding.schema.json", "embedding document");

    // strip the envelope so --embedding can consume it
    write_file(dir + "/emb_raw.json", stored["embedding"].dump());
    RunResult reuse = run(cli + " sbmincc --graph " + dir + "/g1.txt --target 2 --embedding " +
                          dir + "/emb_raw.json");
    check(reuse.exit_code == 0, "solver accepts an imported embedding");
    json j = json::parse(reuse.out, nullptr, false);
    check(j["cut"]["cost"] == "3", "imported embedding reproduces the optimum");
  }

  if (failures == 0) std::cout << "test_cli: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
