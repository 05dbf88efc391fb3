#include <doctest.h>

#include "common/generators.hpp"
#include "faircut/auxcut.hpp"
#include "faircut/errors.hpp"
#include "faircut/oracle.hpp"

using namespace faircut;
using namespace faircut::testing;

namespace {

std::vector<Rat> t1_weights() {
  // a=1 -> 1, b=2 -> 5, c=3 -> 2
  return {Rat(0), Rat(1), Rat(5), Rat(2)};
}

}  // namespace

TEST_SUITE("auxcut") {

TEST_CASE("discretization formulas") {
  SUBCASE("m=4, eps=1/2, B=16") {
    std::vector<Rat> costs{Rat(3), Rat(3), Rat(3), Rat(3)};
    DiscretizeResult d = discretize_costs(costs, Rat(16), Rat(1, 2));
    CHECK(d.budget == 8);
    CHECK(d.lambda == Rat(1, 2));
    CHECK(d.costs == std::vector<long>{1, 1, 1, 1});
  }
  SUBCASE("floor never exceeds the scaled weight") {
    std::vector<Rat> costs{Rat(7, 3), Rat(11, 2)};
    DiscretizeResult d = discretize_costs(costs, Rat(5), Rat(1, 4));
    for (std::size_t i = 0; i < costs.size(); ++i) {
      CHECK(Rat(d.costs[i]) <= d.lambda * costs[i]);
      CHECK(Rat(d.costs[i] + 1) > d.lambda * costs[i]);
    }
  }
  SUBCASE("round-trip slack witness: m=2, eps=1, B=3, weights {2,2}") {
    std::vector<Rat> costs{Rat(2), Rat(2)};
    DiscretizeResult d = discretize_costs(costs, Rat(3), Rat(1));
    CHECK(d.budget == 2);
    CHECK(d.costs == std::vector<long>{1, 1});
    // both edges together are affordable discretized (2 <= 2) and the original
    // cost 4 stays within (1+eps) * B = 6
    CHECK(Rat(4) <= (Rat(1) + 1) * 3);
  }
  CHECK_THROWS_AS(discretize_costs(std::vector<Rat>{Rat(1)}, Rat(0), Rat(1, 2)), InputError);
}

TEST_CASE("tree solver on the T1 examples") {
  RootedTree t = t1();
  SUBCASE("B=3, T=2") {
    AuxTreeResult res = auxcut_tree(t, Rat(3), 2, t1_weights(), Rat(1, 8));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.value == 8);
    CHECK(res.cut.cut_children == std::vector<VertexId>{1, 2});
    CHECK(res.exact);
  }
  SUBCASE("B=2, T=2") {
    AuxTreeResult res = auxcut_tree(t, Rat(2), 2, t1_weights(), Rat(1, 8));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.value == 7);
    CHECK(res.cut.cut_children == std::vector<VertexId>{2});
  }
  SUBCASE("B=0, T=0 vacuous") {
    AuxTreeResult res = auxcut_tree(t, Rat(0), 0, t1_weights(), Rat(1, 8));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.cut.cut_children.empty());
    CHECK(res.value == 0);
  }
  SUBCASE("B=0, T=2 infeasible") {
    AuxTreeResult res = auxcut_tree(t, Rat(0), 2, t1_weights(), Rat(1, 8));
    CHECK(res.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("tree solver equals the oracle on integer instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 100; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "aux-oracle"));
    const int n = 4 + static_cast<int>(pick(rng, 9));
    WeightedGraph g = random_tree_graph(n, rng, true);
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = Rat(1 + pick(rng, 20));
    inst.target = pick(rng, n - 1);
    inst.vertex_weights = random_vertex_weights(g, rng);
    OracleReport oracle = oracle_auxcut(inst);
    AuxTreeResult dp = auxcut_tree(tree_from_graph(g), inst.budget, inst.target,
                                   inst.vertex_weights, Rat(1, 8));
    REQUIRE(oracle.feasible == (dp.status == SolveStatus::Ok));
    if (!oracle.feasible) continue;
    CHECK(dp.value == oracle.optimum);
    CHECK(dp.cut.cost <= inst.budget);
    CHECK(static_cast<long>(dp.cut.protected_real.size()) >= inst.target);
    ++checked;
  }
}

TEST_CASE("discretized solves keep the slack one-sided") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 40; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "aux-slack"));
    const int n = 4 + static_cast<int>(pick(rng, 7));
    WeightedGraph g = random_tree_graph(n, rng, false);  // fractional weights
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = make_rat(1 + pick(rng, 30), 1 + pick(rng, 3));
    inst.target = pick(rng, n - 1);
    inst.vertex_weights = random_vertex_weights(g, rng);
    const Rat eps(1, 4);
    OracleReport oracle = oracle_auxcut(inst);
    AuxTreeResult dp =
        auxcut_tree(tree_from_graph(g), inst.budget, inst.target, inst.vertex_weights, eps);
    if (dp.status != SolveStatus::Ok) {
      CHECK_FALSE(oracle.feasible);
      continue;
    }
    CHECK(dp.cut.cost <= (Rat(1) + eps) * inst.budget);
    CHECK(static_cast<long>(dp.cut.protected_real.size()) >= inst.target);
    if (oracle.feasible) CHECK(dp.value >= oracle.optimum);
    ++checked;
  }
}

TEST_CASE("value is monotone in the budget") {
  RootedTree t = t1();
  Rat last = -1;
  for (long b = 0; b <= 7; ++b) {
    AuxTreeResult res = auxcut_tree(t, Rat(b), 0, t1_weights(), Rat(1, 8));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.value >= last);
    last = res.value;
  }
}

TEST_CASE("general solver on a tree with the identity embedding") {
  WeightedGraph g = tree_to_graph(t1());
  TreeEmbedding emb = build_embedding(g);
  AuxCutInstance inst;
  inst.graph = g;
  inst.budget = Rat(3);
  inst.target = 2;
  inst.vertex_weights = t1_weights();
  AuxGeneralResult res = auxcut_general(inst, emb, Rat(1, 8));
  REQUIRE(res.status == SolveStatus::Ok);
  CHECK(res.value == 8);
  CHECK(res.tree_budget == 3);
}

TEST_CASE("general solver on G1") {
  WeightedGraph g = g1();
  TreeEmbedding emb = build_embedding(g);
  const Rat eps(1, 8);

  SUBCASE("unit weights, save everything") {
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = Rat(3);
    inst.target = 3;
    inst.vertex_weights = {Rat(0), Rat(1), Rat(1), Rat(1)};
    AuxGeneralResult res = auxcut_general(inst, emb, eps);
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.value == 3);
    CHECK(res.cut.cost <= (Rat(1) + eps) * emb.certified_stretch * 3);
    OracleReport oracle = oracle_auxcut(inst);
    CHECK(oracle.optimum == 3);
  }
  SUBCASE("tight budget keeps only {a} affordable at the exact budget") {
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = Rat(2);
    inst.target = 1;
    inst.vertex_weights = {Rat(0), Rat(1), Rat(10), Rat(1)};
    OracleReport oracle = oracle_auxcut(inst);
    REQUIRE(oracle.feasible);
    CHECK(oracle.optimum == 1);
    AuxGeneralResult res = auxcut_general(inst, emb, eps);
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.value >= 1);
  }
}

TEST_CASE("instance validation") {
  AuxCutInstance inst;
  inst.graph = g1();
  inst.budget = Rat(1);
  inst.target = 9;
  inst.vertex_weights = {Rat(0), Rat(1), Rat(1), Rat(1)};
  CHECK_THROWS_AS(inst.validate(), InputError);
  inst.target = 1;
  inst.vertex_weights[0] = 1;  // source must carry zero weight
  CHECK_THROWS_AS(inst.validate(), InputError);
}

}  // TEST_SUITE
