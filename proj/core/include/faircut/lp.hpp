#pragma once

#include <utility>
#include <vector>

#include "faircut/rational.hpp"

namespace faircut {

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpRow {
  std::vector<std::pair<int, Rat>> coeffs;  // (variable index, coefficient)
  RowSense sense = RowSense::LessEqual;
  Rat rhs = 0;
};

/// min objective . x  subject to the rows and x >= 0, solved with exact
/// rational two-phase simplex under Bland's rule. Every consumer in this
/// library operates at desk scale; there is no feasibility tolerance and no
/// post-hoc repair step.
struct LpProblem {
  int num_vars = 0;
  std::vector<Rat> objective;
  std::vector<LpRow> rows;
  bool want_farkas = false;  // track row multipliers for infeasibility certificates
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> x;  // basic optimal solution (a vertex) when Optimal
  Rat objective = 0;
  /// When Infeasible and want_farkas: one multiplier per row with
  ///   u_i >= 0 for GreaterEqual rows, u_i <= 0 for LessEqual rows, free for
  ///   Equal rows,  sum_i u_i a_i <= 0 componentwise,  sum_i u_i b_i > 0.
  /// Verified before being returned.
  std::vector<Rat> farkas;
};

LpResult solve_lp(const LpProblem& lp);

}  // namespace faircut
