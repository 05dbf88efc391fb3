#include <doctest.h>

#include "common/generators.hpp"
#include "faircut/errors.hpp"
#include "faircut/oracle.hpp"

using namespace faircut;
using namespace faircut::testing;

TEST_SUITE("oracle") {

TEST_CASE("sbmincc on G1") {
  WeightedGraph g = g1();
  OracleReport r1 = oracle_sbmincc(g, 1);
  CHECK(r1.optimum == 2);
  CHECK(r1.witness_set == std::vector<VertexId>{1});
  CHECK(oracle_sbmincc(g, 2).optimum == 3);
  CHECK(oracle_sbmincc(g, 3).optimum == 3);
  CHECK(r1.enumerated == 8);
}

TEST_CASE("demfair on the fixtures") {
  WeightedGraph t1g = tree_to_graph(t1());
  DemographicSpec spec;
  spec.groups.push_back({{1, 3}, Rat(1)});
  CHECK(oracle_demfair(t1g, spec).optimum == 3);

  WeightedGraph g = g1();
  DemographicSpec all;
  all.groups.push_back({{1, 2, 3}, Rat(1)});
  CHECK(oracle_demfair(g, all).optimum == 3);
}

TEST_CASE("demfair reports infeasible when no subset qualifies") {
  // no cut can protect the source's side of a non-cuttable structure; emulate
  // with an impossible threshold instead: a group larger than the graph allows
  WeightedGraph g = two_leaf_star();
  DemographicSpec spec;
  spec.groups.push_back({{1}, Rat(1)});
  OracleReport rep = oracle_demfair(g, spec);
  CHECK(rep.feasible);  // protecting {1} is possible here

  // target beyond n-1 is rejected at validation time instead
  CHECK_THROWS_AS(oracle_sbmincc(g, 5), InputError);
}

TEST_CASE("auxcut on T1") {
  WeightedGraph g = tree_to_graph(t1());
  AuxCutInstance inst;
  inst.graph = g;
  inst.vertex_weights = {Rat(0), Rat(1), Rat(5), Rat(2)};
  inst.budget = Rat(3);
  inst.target = 2;
  CHECK(oracle_auxcut(inst).optimum == 8);
  inst.budget = Rat(2);
  CHECK(oracle_auxcut(inst).optimum == 7);
  inst.budget = Rat(0);
  inst.target = 0;
  OracleReport rep = oracle_auxcut(inst);
  CHECK(rep.optimum == 0);
  CHECK(rep.witness_set.empty());
}

TEST_CASE("witnesses re-verify against the problem definition") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "oracle-witness"));
    WeightedGraph g = random_connected_graph(7, rng, true);
    long target = 1 + pick(rng, 3);
    OracleReport rep = oracle_sbmincc(g, target);
    REQUIRE(rep.feasible);
    CHECK(rep.witness_cut.cost == rep.optimum);
    CHECK(static_cast<long>(rep.witness_cut.protected_vertices.size()) >= target);
    CHECK(std::includes(rep.witness_cut.protected_vertices.begin(),
                        rep.witness_cut.protected_vertices.end(), rep.witness_set.begin(),
                        rep.witness_set.end()));
  }
}

TEST_CASE("sbmincc is the single-group special case of demfair") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "oracle-special"));
    WeightedGraph g = random_connected_graph(6, rng, true);
    const long target = 1 + pick(rng, g.num_vertices() - 1);
    DemographicSpec spec;
    DemographicGroup grp;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (v != g.source()) grp.members.push_back(v);
    }
    grp.fraction = Rat(target) / static_cast<long>(grp.members.size());
    spec.groups.push_back(std::move(grp));
    CHECK(oracle_sbmincc(g, target).optimum == oracle_demfair(g, spec).optimum);
  }
}

TEST_CASE("auxcut with zero weights is feasible beyond the sbmincc optimum") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    std::mt19937_64 rng(derive_seed(seed, "oracle-void"));
    WeightedGraph g = random_connected_graph(6, rng, true);
    const long target = 1 + pick(rng, 3);
    OracleReport mincc = oracle_sbmincc(g, target);
    AuxCutInstance inst;
    inst.graph = g;
    inst.budget = mincc.optimum;
    inst.target = target;
    inst.vertex_weights.assign(g.num_vertices(), Rat(0));
    OracleReport aux = oracle_auxcut(inst);
    CHECK(aux.feasible);
    CHECK(aux.optimum == 0);
  }
}

TEST_CASE("plp feasibility on the two-leaf star") {
  WeightedGraph g = two_leaf_star();
  ProtectionSpec spec;
  spec.probabilities = {Rat(0), Rat(1, 2), Rat(1, 2)};
  spec.target = 1;

  PlpOracleReport at2 = oracle_plp_feasible(g, spec, Rat(2));
  REQUIRE(at2.feasible);
  std::vector<Rat> marg = at2.distribution.marginals(3);
  CHECK(marg[1] >= Rat(1, 2));
  CHECK(marg[2] >= Rat(1, 2));

  PlpOracleReport at1 = oracle_plp_feasible(g, spec, Rat(1));
  REQUIRE_FALSE(at1.feasible);
  // certificate normalization: sum p_v y_v = mu + 1
  Rat lhs = 0;
  for (VertexId v = 0; v < 3; ++v) lhs += spec.probabilities[v] * at1.certificate.y[v];
  CHECK(lhs == at1.certificate.mu + 1);
}

TEST_CASE("plp with void constraints is feasible whenever a cut exists") {
  WeightedGraph g = g1();
  ProtectionSpec spec;
  spec.probabilities.assign(4, Rat(0));
  spec.target = 1;
  CHECK(oracle_plp_feasible(g, spec, Rat(2)).feasible);
  CHECK_FALSE(oracle_plp_feasible(g, spec, Rat(1)).feasible);  // cheapest save costs 2
}

TEST_CASE("enumeration bounds refuse oversized instances") {
  std::mt19937_64 rng(derive_seed(1, "oracle-big"));
  WeightedGraph g = random_connected_graph(17, rng, true);
  CHECK_THROWS_AS(oracle_sbmincc(g, 1), RefusalError);

  WeightedGraph g11 = random_connected_graph(11, rng, true);
  ProtectionSpec spec;
  spec.probabilities.assign(11, Rat(0));
  spec.target = 0;
  CHECK_THROWS_AS(oracle_plp_feasible(g11, spec, Rat(1)), RefusalError);
}

}  // TEST_SUITE
