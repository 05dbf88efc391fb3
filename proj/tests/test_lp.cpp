#include <doctest.h>

#include "faircut/lp.hpp"

using namespace faircut;

namespace {

LpRow row(std::vector<std::pair<int, Rat>> coeffs, RowSense sense, Rat rhs) {
  return LpRow{std::move(coeffs), sense, std::move(rhs)};
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("bounded maximization via negated objective") {
  // min -x  s.t.  x <= 5
  LpProblem lp;
  lp.num_vars = 1;
  lp.objective = {Rat(-1)};
  lp.rows.push_back(row({{0, Rat(1)}}, RowSense::LessEqual, 5));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == 5);
  CHECK(res.objective == -5);
}

TEST_CASE("two variables with equality and inequality rows") {
  // min 2x + 3y  s.t.  x + y = 4,  y >= 1
  LpProblem lp;
  lp.num_vars = 2;
  lp.objective = {Rat(2), Rat(3)};
  lp.rows.push_back(row({{0, Rat(1)}, {1, Rat(1)}}, RowSense::Equal, 4));
  lp.rows.push_back(row({{1, Rat(1)}}, RowSense::GreaterEqual, 1));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == 3);
  CHECK(res.x[1] == 1);
  CHECK(res.objective == 9);
}

TEST_CASE("fractional optimum stays exact") {
  // min x + y  s.t.  2x + y >= 1,  x + 3y >= 1
  LpProblem lp;
  lp.num_vars = 2;
  lp.objective = {Rat(1), Rat(1)};
  lp.rows.push_back(row({{0, Rat(2)}, {1, Rat(1)}}, RowSense::GreaterEqual, 1));
  lp.rows.push_back(row({{0, Rat(1)}, {1, Rat(3)}}, RowSense::GreaterEqual, 1));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == Rat(2, 5));
  CHECK(res.x[1] == Rat(1, 5));
  CHECK(res.objective == Rat(3, 5));
}

TEST_CASE("infeasible system yields a verified Farkas certificate") {
  // x >= 1 and x <= 0
  LpProblem lp;
  lp.num_vars = 1;
  lp.objective = {Rat(0)};
  lp.want_farkas = true;
  lp.rows.push_back(row({{0, Rat(1)}}, RowSense::GreaterEqual, 1));
  lp.rows.push_back(row({{0, Rat(1)}}, RowSense::LessEqual, 0));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Infeasible);
  REQUIRE(res.farkas.size() == 2);
  CHECK(res.farkas[0] >= 0);
  CHECK(res.farkas[1] <= 0);
  // u^T A <= 0 and u^T b > 0 (the solver self-verifies; re-check here)
  CHECK(res.farkas[0] + res.farkas[1] <= 0);
  CHECK(res.farkas[0] * 1 + res.farkas[1] * 0 > 0);
}

TEST_CASE("infeasible equality over an empty support") {
  // sum of zero variables = 1
  LpProblem lp;
  lp.num_vars = 0;
  lp.want_farkas = true;
  lp.rows.push_back(row({}, RowSense::Equal, 1));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Infeasible);
  CHECK(res.farkas.size() == 1);
  CHECK(res.farkas[0] > 0);
}

TEST_CASE("unbounded direction is reported") {
  LpProblem lp;
  lp.num_vars = 1;
  lp.objective = {Rat(-1)};
  LpResult res = solve_lp(lp);
  CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("degenerate and redundant rows do not cycle") {
  // min x1 + x2 with several redundant constraints pinning the same vertex
  LpProblem lp;
  lp.num_vars = 2;
  lp.objective = {Rat(1), Rat(1)};
  lp.rows.push_back(row({{0, Rat(1)}, {1, Rat(1)}}, RowSense::GreaterEqual, 2));
  lp.rows.push_back(row({{0, Rat(2)}, {1, Rat(2)}}, RowSense::GreaterEqual, 4));
  lp.rows.push_back(row({{0, Rat(1)}}, RowSense::LessEqual, 1));
  lp.rows.push_back(row({{1, Rat(1)}}, RowSense::LessEqual, 1));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 2);
}

TEST_CASE("basic feasible solutions have support bounded by the row count") {
  // feasibility problem: 3 rows, 8 variables; basic solution uses <= 3
  LpProblem lp;
  lp.num_vars = 8;
  lp.objective.assign(8, Rat(0));
  LpRow sum;
  for (int j = 0; j < 8; ++j) sum.coeffs.push_back({j, Rat(1)});
  sum.sense = RowSense::Equal;
  sum.rhs = 1;
  lp.rows.push_back(sum);
  lp.rows.push_back(row({{0, Rat(1)}, {2, Rat(1)}, {4, Rat(1)}}, RowSense::GreaterEqual, Rat(1, 3)));
  lp.rows.push_back(row({{1, Rat(1)}, {3, Rat(1)}, {5, Rat(1)}}, RowSense::GreaterEqual, Rat(1, 4)));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  int nonzero = 0;
  Rat total = 0;
  for (const Rat& v : res.x) {
    if (v != 0) ++nonzero;
    total += v;
  }
  CHECK(nonzero <= 3);
  CHECK(total == 1);
}

}  // TEST_SUITE
