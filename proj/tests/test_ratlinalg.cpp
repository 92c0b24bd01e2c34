#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crn/ratlinalg.hpp"

#include <random>

using namespace crn;

namespace {

RatMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<int> dist(-5, 5);
  RatMatrix a(rows, RatVector(cols));
  for (auto& row : a)
    for (auto& v : row) v = Rational(dist(rng));
  return a;
}

}  // namespace

TEST_CASE("rref identifies pivots and rank") {
  RatMatrix a{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  auto pivots = rref(a);
  CHECK(pivots == std::vector<std::size_t>{0});
  CHECK(a.size() == 1);
  CHECK(a[0][0] == 1);
  CHECK(a[0][1] == 2);
  CHECK(rank(RatMatrix{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}}) == 2);
  CHECK(rank(RatMatrix{}) == 0);
}

TEST_CASE("nullspace vectors satisfy A x = 0") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
    RatMatrix a = random_matrix(rng, rows, cols);
    RatMatrix ns = nullspace(a, cols);
    CHECK(rank(a) + ns.size() == cols);
    for (const RatVector& x : ns)
      for (const RatVector& row : a) CHECK(dot(row, x) == 0);
  }
}

TEST_CASE("row basis spans the same space") {
  RatMatrix a{{Rational(1), Rational(0), Rational(1)},
              {Rational(0), Rational(1), Rational(1)},
              {Rational(1), Rational(1), Rational(2)}};
  RatMatrix basis = row_basis(a);
  CHECK(basis.size() == 2);
  // Each original row must be dependent on the basis.
  for (const RatVector& row : a) {
    RatMatrix stacked = basis;
    stacked.push_back(row);
    CHECK(rank(stacked) == basis.size());
  }
}
