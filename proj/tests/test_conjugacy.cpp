#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crn/balance.hpp"
#include "crn/conjugacy.hpp"

#include <random>

using namespace crn;

namespace {

Network cascade() {
  return parse_network(R"(species: A1 A2
A1 + 2 A2 -> A1 + 3 A2 ; k = 1
A1 + 3 A2 -> A1 + A2 ; k = 1
A1 + A2 -> 3 A1 ; k = 1
2 A1 -> A2 ; k = 1
)");
}

Network cascade_target() {
  return parse_network(R"(species: A1 A2
A1 + 2 A2 <-> A1 + 3 A2 ; kf = 1 ; kr = 1
A1 + A2 <-> 2 A1 ; kf = 1 ; kr = 1
)");
}

Network knife_edge() {
  return parse_network(R"(species: A1 A2
A1 -> A2 ; k = 1
2 A2 -> A1 ; k = 1
2 A2 -> 3 A1 ; k = 1
)");
}

Network knife_edge_target() {
  return parse_network("species: A1 A2\nA1 <-> 2 A2 ; kf = 1 ; kr = 1\n");
}

}  // namespace

TEST_CASE("reversible-pair target witness is exact") {
  RatVector k(4, Rational(1));
  auto w = solve_conjugacy(cascade(), k, cascade_target());
  REQUIRE(w.has_value());
  CHECK(w->c == RatVector{Rational(2), Rational(1)});
  CHECK(w->b == RatVector{Rational(1), Rational(2), Rational(1), Rational(1)});
  CHECK(w->k_tilde == RatVector{Rational(2), Rational(4), Rational(2), Rational(4)});
  CHECK(w->solution_cone_dim == 1);
}

TEST_CASE("witness scales linearly with the input rates") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(1, 9);
  for (int trial = 0; trial < 10; ++trial) {
    RatVector k;
    for (int i = 0; i < 4; ++i) k.push_back(Rational(num(rng)) / num(rng));
    auto w = solve_conjugacy(cascade(), k, cascade_target());
    REQUIRE(w.has_value());
    CHECK(w->k_tilde ==
          RatVector{2 * k[0], 4 * k[1], 2 * k[2], 4 * k[3]});
  }
}

TEST_CASE("knife edge feasible only when branch rates match") {
  auto w = solve_conjugacy(knife_edge(), {Rational(1), Rational(1), Rational(1)},
                           knife_edge_target());
  REQUIRE(w.has_value());
  CHECK(w->c == RatVector{Rational(2), Rational(1)});
  // Substituting back into the defining identity forces b1 = k1/2, so the
  // transformed rates are (k1, 2 k2).
  CHECK(w->k_tilde == RatVector{Rational(1), Rational(2)});

  CHECK(!solve_conjugacy(knife_edge(), {Rational(1), Rational(2), Rational(1)},
                         knife_edge_target())
             .has_value());
  CHECK(!solve_conjugacy(knife_edge(), {Rational(3), Rational(1), Rational(5)},
                         knife_edge_target())
             .has_value());
}

TEST_CASE("system construction validates input") {
  Network other = parse_network("species: B1 B2\nB1 -> B2 ; k = 1\n");
  RatVector k(4, Rational(1));
  CHECK_THROWS_AS(build_conjugacy_system(cascade(), k, other), ConjugacyError);
  CHECK_THROWS_AS(build_conjugacy_system(cascade(), RatVector(2, Rational(1)), cascade_target()),
                  ConjugacyError);
  CHECK_THROWS_AS(build_conjugacy_system(cascade(), RatVector(4, Rational(-1)), cascade_target()),
                  ConjugacyError);
}

TEST_CASE("transform rates") {
  Network target = cascade_target();
  RatVector b{Rational(1), Rational(2), Rational(1), Rational(1)};
  RatVector c{Rational(2), Rational(1)};
  auto kt = transform_rates(b, c, target);
  CHECK(kt == RatVector{Rational(2), Rational(4), Rational(2), Rational(4)});
  CHECK_THROWS_AS(transform_rates({Rational(1)}, c, target), ConjugacyError);
  CHECK_THROWS_AS(transform_rates(b, {Rational(0), Rational(1)}, target), ConjugacyError);
}

TEST_CASE("cone queries") {
  // Collinear generators intersect strictly; skew ones only at the origin.
  ConeQuery collinear;
  collinear.scaling = {Rational(1), Rational(1)};
  collinear.generators_original = {{Rational(0), Rational(2)}};
  collinear.generators_target = {{Rational(0), Rational(1)}};
  CHECK(cones_intersect(collinear));
  CHECK(cone_contains(collinear));

  ConeQuery skew = collinear;
  skew.generators_original = {{Rational(2), Rational(-1)}};
  skew.generators_target = {{Rational(1), Rational(-1)}};
  CHECK(!cones_intersect(skew));
  ConeQuery rescued = skew;
  rescued.scaling = {Rational(2), Rational(1)};
  CHECK(cones_intersect(rescued));
  CHECK(cone_contains(rescued));

  ConeQuery empty;
  empty.scaling = {Rational(1), Rational(1)};
  CHECK(cones_intersect(empty));
  CHECK(cone_contains(empty));
}

TEST_CASE("identity-scaling cone screen") {
  CHECK(craciun_pantea_check(cascade(), cascade()));
  // The A1+A2 cones only meet after rescaling, so the identity screen fails.
  CHECK(!craciun_pantea_check(cascade(), cascade_target()));
  // Different reactant complex sets fail outright.
  CHECK(!craciun_pantea_check(knife_edge(), knife_edge_target()));
}

TEST_CASE("linear map validation") {
  CHECK(validate_linear_map({{0, 2.0}, {0.5, 0}}));
  CHECK(validate_linear_map({{1.0}}));
  CHECK(!validate_linear_map({{1.0, 0.5}, {0, 1.0}}));   // two entries in a row
  CHECK(!validate_linear_map({{1.0, 0}, {1.0, 0}}));     // column hit twice
  CHECK(!validate_linear_map({{-1.0, 0}, {0, 1.0}}));    // negative entry
  CHECK(!validate_linear_map({{0, 0}, {0, 1.0}}));       // empty row
  CHECK(!validate_linear_map({}));
  CHECK(!validate_linear_map({{1.0, 0}}));               // not square
}

TEST_CASE("numerical trajectory verification") {
  RatVector k(4, Rational(1));
  auto w = solve_conjugacy(cascade(), k, cascade_target());
  REQUIRE(w.has_value());
  OdeSystem orig(cascade(), k);
  OdeSystem targ(cascade_target(), w->k_tilde);
  auto ver = verify_conjugacy_numerically(orig, targ, *w, {1.0, 1.0}, 10.0, 1e-6);
  CHECK(ver.passed);
  CHECK(ver.max_deviation < 1e-6);

  // A wrong scaling must be detected.
  ConjugacyWitness bad = *w;
  bad.c[0] = Rational(3);
  auto ver2 = verify_conjugacy_numerically(orig, targ, bad, {1.0, 1.0}, 10.0, 1e-6);
  CHECK(!ver2.passed);
}

TEST_CASE("permutation search relabels species") {
  Network forward = parse_network("species: A1 A2\nA1 -> A2 ; k = 1\n");
  Network backward = parse_network("species: A1 A2\nA2 -> A1 ; k = 1\n");
  CHECK(!solve_conjugacy(forward, {Rational(1)}, backward).has_value());
  auto w = solve_conjugacy_permuted(forward, {Rational(1)}, backward);
  REQUIRE(w.has_value());
  CHECK(w->permutation == std::vector<std::size_t>{1, 0});
  CHECK(w->k_tilde == RatVector{Rational(1)});
}
