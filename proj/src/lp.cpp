#include "crn/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace crn::lp {

void Problem::add_row(RatVector coeffs, Relation rel, Rational rhs) {
  assert(coeffs.size() == num_vars);
  rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

// Dense tableau over exact rationals. Columns: structural vars, slack /
// surplus vars, artificial vars, then the rhs column.
class Tableau {
public:
  Tableau(const Problem& p) : n_(p.num_vars) {
    std::size_t m = p.rows.size();
    std::size_t slacks = 0;
    for (const auto& r : p.rows)
      if (r.rel != Relation::Eq) ++slacks;
    total_ = n_ + slacks + m;  // one artificial per row, some unused
    a_.assign(m, RatVector(total_ + 1, Rational(0)));
    basis_.assign(m, 0);
    art_begin_ = n_ + slacks;

    std::size_t slack_col = n_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = p.rows[i];
      bool flip = row.rhs < 0;
      Rational sign = flip ? Rational(-1) : Rational(1);
      for (std::size_t j = 0; j < n_; ++j) a_[i][j] = sign * row.coeffs[j];
      a_[i][total_] = sign * row.rhs;
      Relation rel = row.rel;
      if (flip && rel == Relation::Le) rel = Relation::Ge;
      else if (flip && rel == Relation::Ge) rel = Relation::Le;
      if (rel == Relation::Le) {
        a_[i][slack_col] = 1;
        basis_[i] = slack_col;
        ++slack_col;
      } else if (rel == Relation::Ge) {
        a_[i][slack_col] = -1;
        a_[i][art_begin_ + i] = 1;
        basis_[i] = art_begin_ + i;
        ++slack_col;
      } else {
        a_[i][art_begin_ + i] = 1;
        basis_[i] = art_begin_ + i;
      }
    }
  }

  // Phase 1: minimize the sum of artificials. Returns false if infeasible.
  bool phase1() {
    RatVector cost(total_, Rational(0));
    for (std::size_t j = art_begin_; j < total_; ++j) cost[j] = -1;  // maximize -sum
    optimize(cost);
    Rational obj(0);
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (basis_[i] >= art_begin_) obj += a_[i][total_];
    if (obj != 0) return false;
    // Pivot remaining (degenerate) artificials out of the basis where possible.
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (basis_[i] < art_begin_) continue;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (a_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
      // A row whose artificial cannot leave is identically zero over the
      // structural columns; it imposes no constraint.
    }
    return true;
  }

  // Phase 2: maximize the given structural objective. Returns false if unbounded.
  bool phase2(const RatVector& objective) {
    RatVector cost(total_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost[j] = objective[j];
    return optimize(cost, /*forbid_artificials=*/true);
  }

  RatVector solution() const {
    RatVector x(n_, Rational(0));
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (basis_[i] < n_) x[basis_[i]] = a_[i][total_];
    return x;
  }

private:
  void pivot(std::size_t row, std::size_t col) {
    Rational piv = a_[row][col];
    for (auto& v : a_[row]) v /= piv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == row || a_[i][col] == 0) continue;
      Rational f = a_[i][col];
      for (std::size_t j = 0; j <= total_; ++j) a_[i][j] -= f * a_[row][j];
    }
    basis_[row] = col;
  }

  // Bland's rule primal simplex on max cost.x. Returns false on unboundedness.
  bool optimize(const RatVector& cost, bool forbid_artificials = false) {
    std::size_t m = a_.size();
    while (true) {
      // Reduced costs: r_j = c_j - c_B . B^{-1} A_j, computed per column.
      std::size_t enter = SIZE_MAX;
      std::size_t limit = forbid_artificials ? art_begin_ : total_;
      for (std::size_t j = 0; j < limit && enter == SIZE_MAX; ++j) {
        Rational r = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (cost[basis_[i]] != 0) r -= cost[basis_[i]] * a_[i][j];
        bool basic = false;
        for (std::size_t i = 0; i < m; ++i)
          if (basis_[i] == j) basic = true;
        if (!basic && r > 0) enter = j;
      }
      if (enter == SIZE_MAX) return true;
      std::size_t leave = SIZE_MAX;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (a_[i][enter] <= 0) continue;
        Rational ratio = a_[i][total_] / a_[i][enter];
        if (leave == SIZE_MAX || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave]))
          leave = i, best = ratio;
      }
      if (leave == SIZE_MAX) return false;
      pivot(leave, enter);
    }
  }

  std::size_t n_;
  std::size_t total_;
  std::size_t art_begin_;
  RatMatrix a_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Result solve(const Problem& problem) {
  for (const auto& r : problem.rows)
    if (r.coeffs.size() != problem.num_vars)
      throw std::invalid_argument("lp row width mismatch");
  if (problem.objective.size() != problem.num_vars)
    throw std::invalid_argument("lp objective width mismatch");

  Tableau t(problem);
  Result res;
  if (!t.phase1()) {
    res.status = Status::Infeasible;
    return res;
  }
  if (!t.phase2(problem.objective)) {
    res.status = Status::Unbounded;
    return res;
  }
  res.status = Status::Optimal;
  res.x = t.solution();
  res.objective = 0;
  for (std::size_t j = 0; j < problem.num_vars; ++j)
    res.objective += problem.objective[j] * res.x[j];
  return res;
}

}  // namespace crn::lp
