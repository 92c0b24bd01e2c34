#include "crn/ratlinalg.hpp"

#include <cassert>

namespace crn {

std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  std::size_t rows = a.size(), cols = a[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && a[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[row], a[sel]);
    Rational inv = a[row][col];
    for (std::size_t j = col; j < cols; ++j) a[row][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

std::size_t rank(RatMatrix a) { return rref(a).size(); }

RatMatrix nullspace(RatMatrix a, std::size_t cols) {
  for (auto& r : a) assert(r.size() == cols);
  std::vector<std::size_t> pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  RatMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

RatMatrix row_basis(RatMatrix a) {
  rref(a);
  return a;
}

Rational dot(const RatVector& x, const RatVector& y) {
  assert(x.size() == y.size());
  Rational s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace crn
