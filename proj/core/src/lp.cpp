#include "faircut/lp.hpp"

#include <algorithm>

#include "faircut/errors.hpp"

namespace faircut {

namespace {

// Dense exact-rational tableau. Column layout:
//   [0, nv)                structural variables
//   [nv, nv+ns)            slack / surplus variables
//   [nv+ns, nv+ns+na)      artificials (phase 1 only)
//   [nv+ns+na, ...)        row-operation trackers (identity at start), used to
//                          read off simplex multipliers for Farkas certificates
class Simplex {
 public:
  explicit Simplex(const LpProblem& lp) : lp_(lp) {
    nv_ = lp.num_vars;
    R_ = static_cast<int>(lp.rows.size());

    // Normalized rows: flip so rhs >= 0.
    norm_.assign(R_, {});
    flipped_.assign(R_, 0);
    for (int i = 0; i < R_; ++i) {
      const LpRow& row = lp.rows[i];
      std::vector<Rat> a(nv_, Rat(0));
      for (const auto& [j, c] : row.coeffs) {
        internal_check(j >= 0 && j < nv_, "lp: variable index out of range");
        a[j] += c;
      }
      Rat b = row.rhs;
      if (b < 0) {
        for (Rat& c : a) c = -c;
        b = -b;
        flipped_[i] = 1;
      }
      norm_[i] = {std::move(a), b};
    }

    // Slack columns for inequality rows.
    slack_col_.assign(R_, -1);
    int ns = 0;
    for (int i = 0; i < R_; ++i) {
      if (lp.rows[i].sense != RowSense::Equal) slack_col_[i] = nv_ + ns++;
    }
    ns_ = ns;

    // Basis: a slack with coefficient +1 when available, else an artificial.
    art_col_.assign(R_, -1);
    int na = 0;
    for (int i = 0; i < R_; ++i) {
      if (slack_sign(i) != 1) art_col_[i] = nv_ + ns_ + na++;
    }
    na_ = na;

    track_base_ = nv_ + ns_ + na_;
    C_ = track_base_ + (lp.want_farkas ? R_ : 0);

    T_.assign(R_, std::vector<Rat>(C_, Rat(0)));
    rhs_.assign(R_, Rat(0));
    basis_.assign(R_, -1);
    for (int i = 0; i < R_; ++i) {
      for (int j = 0; j < nv_; ++j) T_[i][j] = norm_[i].first[j];
      if (slack_col_[i] >= 0) T_[i][slack_col_[i]] = slack_sign(i);
      if (art_col_[i] >= 0) T_[i][art_col_[i]] = 1;
      if (lp.want_farkas) T_[i][track_base_ + i] = 1;
      rhs_[i] = norm_[i].second;
      basis_[i] = art_col_[i] >= 0 ? art_col_[i] : slack_col_[i];
    }
  }

  LpResult run() {
    LpResult res;

    // Phase 1: minimize the sum of artificials.
    z_.assign(C_, Rat(0));
    for (int i = 0; i < R_; ++i) {
      if (art_col_[i] >= 0) z_[art_col_[i]] = 1;
    }
    for (int i = 0; i < R_; ++i) {
      if (basis_[i] >= nv_ + ns_ && basis_[i] < track_base_) subtract_row_from_z(i);
    }
    pivot_loop(/*allow_artificials=*/true);

    Rat phase1 = 0;
    for (int i = 0; i < R_; ++i) {
      if (basis_[i] >= nv_ + ns_ && basis_[i] < track_base_) phase1 += rhs_[i];
    }
    if (phase1 > 0) {
      res.status = LpStatus::Infeasible;
      if (lp_.want_farkas) res.farkas = extract_farkas();
      return res;
    }

    // Artificials still basic sit at zero; pivot them out so phase 2 cannot
    // grow them back above zero through rows with negative entering
    // coefficients. Rows with no usable column are redundant and stay inert.
    for (int i = 0; i < R_; ++i) {
      if (basis_[i] < nv_ + ns_ || basis_[i] >= track_base_) continue;
      internal_check(rhs_[i] == 0, "lp: basic artificial with positive value after phase 1");
      for (int j = 0; j < nv_ + ns_; ++j) {
        if (T_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }

    // Phase 2: original objective; any artificial left basic belongs to an
    // all-zero (redundant) row and is banned from entering.
    z_.assign(C_, Rat(0));
    for (int j = 0; j < nv_; ++j) z_[j] = lp_.objective[j];
    for (int i = 0; i < R_; ++i) {
      int b = basis_[i];
      if (b < nv_ && lp_.objective[b] != 0) {
        Rat coef = lp_.objective[b];
        for (int j = 0; j < C_; ++j) {
          if (T_[i][j] != 0) z_[j] -= coef * T_[i][j];
        }
      }
    }
    if (!pivot_loop(/*allow_artificials=*/false)) {
      res.status = LpStatus::Unbounded;
      return res;
    }

    res.status = LpStatus::Optimal;
    res.x.assign(nv_, Rat(0));
    for (int i = 0; i < R_; ++i) {
      if (basis_[i] < nv_) res.x[basis_[i]] = rhs_[i];
    }
    res.objective = 0;
    for (int j = 0; j < nv_; ++j) res.objective += lp_.objective[j] * res.x[j];
    return res;
  }

 private:
  int slack_sign(int i) const {
    const RowSense s = lp_.rows[i].sense;
    if (s == RowSense::Equal) return 0;
    int sign = s == RowSense::LessEqual ? 1 : -1;
    return flipped_[i] ? -sign : sign;
  }

  void subtract_row_from_z(int i) {
    for (int j = 0; j < C_; ++j) {
      if (T_[i][j] != 0) z_[j] -= T_[i][j];
    }
    // rhs of the z row is tracked implicitly; objective values are recomputed
    // from the basis when needed.
  }

  // Bland's rule pivoting until optimal (returns true) or unbounded (false).
  bool pivot_loop(bool allow_artificials) {
    const int limit = allow_artificials ? track_base_ : nv_ + ns_;
    while (true) {
      int entering = -1;
      for (int j = 0; j < limit; ++j) {
        if (z_[j] < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      int leaving = -1;
      Rat best_ratio;
      for (int i = 0; i < R_; ++i) {
        if (T_[i][entering] <= 0) continue;
        Rat ratio = rhs_[i] / T_[i][entering];
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int r, int s) {
    Rat piv = T_[r][s];
    internal_check(piv != 0, "lp: zero pivot");
    if (piv != 1) {
      for (int j = 0; j < C_; ++j) {
        if (T_[r][j] != 0) T_[r][j] /= piv;
      }
      rhs_[r] /= piv;
    }
    for (int i = 0; i < R_; ++i) {
      if (i == r || T_[i][s] == 0) continue;
      Rat f = T_[i][s];
      for (int j = 0; j < C_; ++j) {
        if (T_[r][j] != 0) T_[i][j] -= f * T_[r][j];
      }
      rhs_[i] -= f * rhs_[r];
    }
    if (z_[s] != 0) {
      Rat f = z_[s];
      for (int j = 0; j < C_; ++j) {
        if (T_[r][j] != 0) z_[j] -= f * T_[r][j];
      }
    }
    basis_[r] = s;
  }

  // Phase-1 simplex multipliers y_i = -z[tracker_i]; mapped back through row
  // flips they witness infeasibility. Verified exactly before returning.
  std::vector<Rat> extract_farkas() {
    internal_check(lp_.want_farkas, "farkas requested without trackers");
    std::vector<Rat> u(R_);
    for (int i = 0; i < R_; ++i) {
      Rat y = -z_[track_base_ + i];
      u[i] = flipped_[i] ? -y : y;
    }
    // sum_i u_i a_ij <= 0 for every structural variable j
    for (int j = 0; j < nv_; ++j) {
      Rat dot = 0;
      for (int i = 0; i < R_; ++i) {
        const Rat& coef = flipped_[i] ? -norm_[i].first[j] : norm_[i].first[j];
        if (coef != 0) dot += u[i] * coef;
      }
      internal_check(dot <= 0, "farkas: positive column combination");
    }
    // sign conditions per row sense
    Rat value = 0;
    for (int i = 0; i < R_; ++i) {
      const RowSense s = lp_.rows[i].sense;
      if (s == RowSense::GreaterEqual) internal_check(u[i] >= 0, "farkas: bad sign for >= row");
      if (s == RowSense::LessEqual) internal_check(u[i] <= 0, "farkas: bad sign for <= row");
      Rat b = flipped_[i] ? -norm_[i].second : norm_[i].second;
      value += u[i] * b;
    }
    internal_check(value > 0, "farkas: certificate value not positive");
    return u;
  }

  const LpProblem& lp_;
  int nv_ = 0, ns_ = 0, na_ = 0, R_ = 0, C_ = 0, track_base_ = 0;
  std::vector<std::pair<std::vector<Rat>, Rat>> norm_;  // normalized (a, b), b >= 0
  std::vector<char> flipped_;
  std::vector<int> slack_col_, art_col_, basis_;
  std::vector<std::vector<Rat>> T_;
  std::vector<Rat> rhs_, z_;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
  internal_check(static_cast<int>(lp.objective.size()) == lp.num_vars,
                 "lp: objective size mismatch");
  Simplex s(lp);
  return s.run();
}

}  // namespace faircut
