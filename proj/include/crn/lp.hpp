#pragma once

#include "crn/rational.hpp"

#include <cstddef>
#include <vector>

namespace crn::lp {

enum class Relation { Eq, Le, Ge };

enum class Status { Optimal, Infeasible, Unbounded };

/// maximize objective . x  subject to  row . x (rel) rhs  and  x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  RatVector objective;
  struct Row {
    RatVector coeffs;
    Relation rel;
    Rational rhs;
  };
  std::vector<Row> rows;

  void add_row(RatVector coeffs, Relation rel, Rational rhs);
};

struct Result {
  Status status = Status::Infeasible;
  RatVector x;
  Rational objective;
};

/// Exact two-phase dense simplex with Bland's rule (terminating, deterministic).
Result solve(const Problem& problem);

}  // namespace crn::lp
