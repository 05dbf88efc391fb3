#include <doctest.h>

#include <algorithm>

#include "common/generators.hpp"
#include "faircut/demfair.hpp"
#include "faircut/errors.hpp"
#include "faircut/oracle.hpp"

using namespace faircut;
using namespace faircut::testing;

namespace {

DemographicSpec one_group(std::vector<VertexId> members, Rat fraction) {
  DemographicSpec spec;
  spec.groups.push_back({std::move(members), std::move(fraction)});
  return spec;
}

}  // namespace

TEST_SUITE("demfair") {

TEST_CASE("tree dp solves the T1 examples") {
  RootedTree t = binarize(t1());

  SUBCASE("group {a,c}, full coverage") {
    TreeDemFairResult res = demfair_tree_dp(t, one_group({1, 3}, Rat(1)));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.cut.cost == 3);
    CHECK(res.cut.cut_children == std::vector<VertexId>{1, 2});
  }
  SUBCASE("group {a,c}, half coverage") {
    TreeDemFairResult res = demfair_tree_dp(t, one_group({1, 3}, Rat(1, 2)));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.cut.cost == 1);
    CHECK(res.cut.cut_children == std::vector<VertexId>{1});
  }
  SUBCASE("single member group") {
    TreeDemFairResult res = demfair_tree_dp(t, one_group({1}, Rat(1)));
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.cut.cost == 1);
  }
  SUBCASE("two singleton groups") {
    DemographicSpec spec;
    spec.groups.push_back({{1}, Rat(1)});
    spec.groups.push_back({{3}, Rat(1)});
    TreeDemFairResult res = demfair_tree_dp(t, spec);
    REQUIRE(res.status == SolveStatus::Ok);
    CHECK(res.cut.cost == 3);
  }
}

TEST_CASE("tree dp equals the oracle on random instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 100; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "dp-oracle"));
    const int n = 4 + static_cast<int>(pick(rng, 9));  // n <= 12
    WeightedGraph g = random_tree_graph(n, rng, false);
    const int gamma = 1 + static_cast<int>(pick(rng, 2));
    DemographicSpec spec = random_spec(g, gamma, rng);
    OracleReport oracle = oracle_demfair(g, spec);
    TreeDemFairResult dp = demfair_tree_dp(binarize(tree_from_graph(g)), spec);
    REQUIRE(oracle.feasible);
    REQUIRE(dp.status == SolveStatus::Ok);
    CHECK(dp.cut.cost == oracle.optimum);
    ++checked;
  }
}

TEST_CASE("tree dp refuses oversized tables and non-binary trees") {
  RootedTree t = t1();
  CHECK_THROWS_AS(demfair_tree_dp(t1(), one_group({1}, Rat(1)),
                                  DemFairOptions{.max_table_entries = 1}),
                  RefusalError);

  RootedTree wide;
  wide.root = 0;
  wide.parent = {-1, 0, 0, 0};
  wide.edge_cost = {Rat(0), Rat(1), Rat(1), Rat(1)};
  wide.edge_cuttable = {0, 1, 1, 1};
  wide.is_real = {1, 1, 1, 1};
  wide.children = {{1, 2, 3}, {}, {}, {}};
  CHECK_THROWS_AS(demfair_tree_dp(wide, one_group({1}, Rat(1))), InputError);
}

TEST_CASE("tree dp reports infeasible specs") {
  // a is behind a structural (non-cuttable) edge
  RootedTree t = t1();
  t.edge_cuttable[1] = 0;
  TreeDemFairResult res = demfair_tree_dp(binarize(t), one_group({1}, Rat(1)));
  CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("lp relaxation on T1") {
  RootedTree t = t1();
  SUBCASE("forced single path edge") {
    LpSolveOutcome out = demfair_lp_solve(t, one_group({1}, Rat(1)));
    REQUIRE(out.status == SolveStatus::Ok);
    CHECK(out.fractional.x[1] == 1);
    CHECK(out.fractional.objective == 1);
  }
  SUBCASE("fractional optimum for {b,c} at half coverage") {
    LpSolveOutcome out = demfair_lp_solve(t, one_group({2, 3}, Rat(1, 2)));
    REQUIRE(out.status == SolveStatus::Ok);
    CHECK(out.fractional.objective == 1);  // x_{(s,b)} = 1/2 covers y_b + y_c = 1
  }
}

TEST_CASE("lp objective never exceeds the dp optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "lp-dominance"));
    const int n = 4 + static_cast<int>(pick(rng, 7));
    WeightedGraph g = random_tree_graph(n, rng, false);
    DemographicSpec spec = random_spec(g, 1 + static_cast<int>(pick(rng, 2)), rng);
    RootedTree t = tree_from_graph(g);
    LpSolveOutcome lp = demfair_lp_solve(t, spec);
    TreeDemFairResult dp = demfair_tree_dp(binarize(t), spec);
    REQUIRE(lp.status == SolveStatus::Ok);
    REQUIRE(dp.status == SolveStatus::Ok);
    CHECK(lp.fractional.objective <= dp.cut.cost);
    // constraint (2): y is the path prefix sum of x
    for (VertexId v = 0; v < t.size(); ++v) {
      Rat along = 0;
      for (VertexId e : root_path(t, v)) along += lp.fractional.x[e];
      CHECK(lp.fractional.y[v] == along);
    }
  }
}

TEST_CASE("round_once degenerate cases") {
  RootedTree t = t1();
  FractionalCut frac;
  frac.x.assign(4, Rat(0));
  frac.y.assign(4, Rat(0));

  SUBCASE("all-zero x never cuts") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) CHECK(round_once(t, frac, rng).cut_children.empty());
  }
  SUBCASE("x = 1 on (s,b) always cuts it and blocks (b,c)") {
    frac.x[2] = 1;
    frac.y[2] = 1;
    frac.y[3] = 1;
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      TreeCut cut = round_once(t, frac, rng);
      CHECK(cut.cut_children == std::vector<VertexId>{2});
    }
  }
}

TEST_CASE("round_once matches the telescoping marginal on a path") {
  // s=0 - u=1 (x=3/10) - v=2 (x=1/2): Pr[(u,v) cut] = x_{(u,v)} = 1/2
  RootedTree path;
  path.root = 0;
  path.parent = {-1, 0, 1};
  path.edge_cost = {Rat(0), Rat(1), Rat(1)};
  path.edge_cuttable = {0, 1, 1};
  path.is_real = {1, 1, 1};
  path.children = {{1}, {2}, {}};
  FractionalCut frac;
  frac.x = {Rat(0), Rat(3, 10), Rat(1, 2)};
  frac.y = {Rat(0), Rat(3, 10), Rat(4, 5)};

  const int trials = 10000;
  int deep = 0, shallow = 0;
  std::mt19937_64 rng(derive_seed(3, "marginal"));
  for (int i = 0; i < trials; ++i) {
    TreeCut cut = round_once(path, frac, rng);
    CHECK(cut.cut_children.size() <= 1);  // path exclusivity
    for (VertexId c : cut.cut_children) {
      if (c == 2) ++deep;
      if (c == 1) ++shallow;
    }
  }
  // within 4 standard errors of 1/2 and 3/10
  CHECK(std::abs(deep / double(trials) - 0.5) < 4 * std::sqrt(0.25 / trials));
  CHECK(std::abs(shallow / double(trials) - 0.3) < 4 * std::sqrt(0.3 * 0.7 / trials));
}

TEST_CASE("repetition count formula") {
  CHECK(demfair_repetition_count(4, Rat(1, 2), Rat(1, 2)) == 222);
  CHECK(demfair_repetition_count(1, Rat(1, 2), Rat(1)) == 80);  // ln term pinned to 1
  CHECK(demfair_repetition_count(1, Rat(99, 100), Rat(1)) >= 1);
}

TEST_CASE("lp_round protects everything when the relaxation is integral") {
  RootedTree t = t1();
  DemographicSpec spec = one_group({1, 2, 3}, Rat(1));
  TreeDemFairResult res = demfair_lp_round(t, spec, Rat(1, 4), 7);
  REQUIRE(res.status == SolveStatus::Ok);
  CHECK(res.cut.protected_real == std::vector<VertexId>{1, 2, 3});
  CHECK(res.retries == 0);
  CHECK(res.lp_objective == 3);
  CHECK(res.cut.cost <= Rat(4) * res.repetitions * res.lp_objective);
}

TEST_CASE("lp_round coverage thresholds on singleton groups") {
  // f = 1 singletons: (1-eps) * 1 * 1 < 1, so one protected vertex suffices
  RootedTree t = t1();
  DemographicSpec spec;
  spec.groups.push_back({{1}, Rat(1)});
  spec.groups.push_back({{3}, Rat(1)});
  TreeDemFairResult res = demfair_lp_round(t, spec, Rat(1, 4), 11);
  REQUIRE(res.status == SolveStatus::Ok);
  for (long count : res.group_protected) CHECK(count >= 1);
}

TEST_CASE("general solver on a tree input matches the tree solver") {
  WeightedGraph g = tree_to_graph(t1());
  DemographicSpec spec = one_group({1, 3}, Rat(1));
  GeneralDemFairResult general =
      demfair_general(g, spec, DemFairMethod::Dp, nullptr, Rat(1, 4), 5);
  REQUIRE(general.status == SolveStatus::Ok);
  CHECK(general.cut.cost == 3);
  CHECK(general.certified_stretch == 1);
}

TEST_CASE("general solver on G1 with full coverage") {
  WeightedGraph g = g1();
  DemographicSpec spec = one_group({1, 2, 3}, Rat(1));
  GeneralDemFairResult res = demfair_general(g, spec, DemFairMethod::Dp, nullptr, Rat(1, 4), 5);
  REQUIRE(res.status == SolveStatus::Ok);
  CHECK(res.cut.cost == 3);  // oracle optimum; ratio 1 here
  CHECK(res.group_protected[0] == 3);
}

TEST_CASE("general solver lp method keeps (1-eps) coverage on graphs") {
  WeightedGraph g = g1();
  DemographicSpec spec = one_group({1, 2, 3}, Rat(1));
  const Rat eps(1, 4);
  GeneralDemFairResult res = demfair_general(g, spec, DemFairMethod::Lp, nullptr, eps, 21);
  REQUIRE(res.status == SolveStatus::Ok);
  // (1 - 1/4) * 3 = 9/4, so at least three protected members are needed
  CHECK(Rat(res.group_protected[0]) >= (Rat(1) - eps) * 3);
  CHECK(res.repetitions >= 1);
}

TEST_CASE("general solver feasibility and cost factor on the triangle") {
  WeightedGraph g = triangle();
  DemographicSpec spec = one_group({1, 2}, Rat(1, 2));
  TreeEmbedding emb = build_embedding(g);
  GeneralDemFairResult res = demfair_general(g, spec, DemFairMethod::Dp, &emb, Rat(1, 4), 5);
  REQUIRE(res.status == SolveStatus::Ok);
  CHECK(res.group_protected[0] >= 1);
  OracleReport oracle = oracle_demfair(g, spec);
  CHECK(res.cut.cost <= emb.certified_stretch * oracle.optimum);
}

}  // TEST_SUITE
