#pragma once

#include "crn/rational.hpp"

#include <cstddef>
#include <vector>

namespace crn {

/// Reduced row echelon form in place; returns the pivot column per row kept.
std::vector<std::size_t> rref(RatMatrix& a);

std::size_t rank(RatMatrix a);

/// Basis of { x : A x = 0 }, one vector per free column.
RatMatrix nullspace(RatMatrix a, std::size_t cols);

/// Basis of the row space (the nonzero rows of the rref).
RatMatrix row_basis(RatMatrix a);

Rational dot(const RatVector& x, const RatVector& y);

}  // namespace crn
