#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crn/structure.hpp"

#include <cmath>
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

Network knife_edge(const Rational& k2, const Rational& k3) {
  std::vector<Reaction> rx{{Complex{{1, 0}}, Complex{{0, 1}}, Rational(1)},
                           {Complex{{0, 2}}, Complex{{1, 0}}, k2},
                           {Complex{{0, 2}}, Complex{{3, 0}}, k3}};
  return Network(SpeciesTable{{"A1", "A2"}}, std::move(rx));
}

// Random weakly reversible network: a directed cycle over random complexes.
Network random_cycle_network(std::mt19937& rng) {
  std::size_t m = 1 + rng() % 3;
  // With m species and coefficients in 0..3 there are 4^m distinct complexes.
  std::size_t n = 2 + rng() % (m == 1 ? 2 : 4);
  std::uniform_int_distribution<long> coeff(0, 3);
  std::vector<Complex> complexes;
  while (complexes.size() < n) {
    Complex c;
    c.coeffs.resize(m);
    for (auto& v : c.coeffs) v = coeff(rng);
    if (std::find(complexes.begin(), complexes.end(), c) == complexes.end())
      complexes.push_back(c);
  }
  std::vector<Reaction> rx;
  std::uniform_int_distribution<int> rate(1, 9);
  for (std::size_t i = 0; i < n; ++i)
    rx.push_back({complexes[i], complexes[(i + 1) % n], Rational(rate(rng))});
  SpeciesTable sp;
  for (std::size_t j = 0; j < m; ++j) sp.names.push_back("X" + std::to_string(j));
  return Network(std::move(sp), std::move(rx));
}

}  // namespace

TEST_CASE("complex graph and reachability") {
  Network net = cascade();
  ComplexGraph g = ComplexGraph::of(net);
  CHECK(g.node_count == 6);
  CHECK(g.edges.size() == 4);
  CHECK(has_path(g, 0, 3));  // A1+2A2 ~> 3A1
  CHECK(!has_path(g, 3, 0));
  CHECK(has_path(g, 2, 2));
  CHECK_THROWS_AS(has_path(g, 0, 99), StructureError);
}

TEST_CASE("scc agrees with brute-force path oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 5;
    ComplexGraph g;
    g.node_count = n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && rng() % 3 == 0) g.edges.push_back({i, j, Rational(1)});
    auto scc = strongly_connected_components(g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool same = scc[i] == scc[j];
        bool mutual = has_path(g, i, j) && has_path(g, j, i);
        CHECK(same == mutual);
      }
  }
}

TEST_CASE("weak reversibility") {
  CHECK(!is_weakly_reversible(cascade()));
  Network tri = parse_network("A1 -> A2 ; k = 1\nA2 -> A3 ; k = 1\nA3 -> A1 ; k = 1\n");
  CHECK(is_weakly_reversible(tri));
  Network pairs = parse_network(R"(species: A1 A2
A1 + 2 A2 <-> A1 + 3 A2 ; kf = 1 ; kr = 1
A1 + A2 <-> 2 A1 ; kf = 1 ; kr = 1
)");
  CHECK(is_weakly_reversible(pairs));
}

TEST_CASE("linkage classes") {
  Network pairs = parse_network(R"(species: A1 A2
A1 + 2 A2 <-> A1 + 3 A2 ; kf = 1 ; kr = 1
A1 + A2 <-> 2 A1 ; kf = 1 ; kr = 1
)");
  auto classes = linkage_classes(pairs);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == std::vector<std::size_t>{0, 1});
  CHECK(classes[1] == std::vector<std::size_t>{2, 3});
  CHECK(linkage_classes(cascade()).size() == 2);
}

TEST_CASE("stoichiometric and kinetic subspaces on the knife edge") {
  // s = 2 always; s* drops to 1 exactly when the two branch rates coincide.
  Network equal = knife_edge(Rational(2), Rational(2));
  auto rep = kinetic_subspace(equal);
  CHECK(rep.s == 2);
  CHECK(rep.s_star == 1);

  Network unequal = knife_edge(Rational(1), Rational(2));
  auto rep2 = kinetic_subspace(unequal);
  CHECK(rep2.s == 2);
  CHECK(rep2.s_star == 2);
  CHECK(stoichiometric_subspace(unequal).s == 2);
}

TEST_CASE("weakly reversible networks have s = s*") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = random_cycle_network(rng);
    REQUIRE(is_weakly_reversible(net));
    auto rep = kinetic_subspace(net);
    CHECK(rep.s == rep.s_star);
  }
}

TEST_CASE("kinetic subspace is contained in the stoichiometric one") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Network net = random_cycle_network(rng);
    auto rep = kinetic_subspace(net);
    CHECK(rep.s_star <= rep.s);
    // Every kinetic basis vector lies in the span of the stoichiometric basis.
    RatMatrix stacked = rep.stoich_basis;
    for (const auto& v : rep.kinetic_basis) stacked.push_back(v);
    CHECK(rank(stacked) == rep.s);
  }
}

TEST_CASE("compatibility class basis is orthonormal") {
  Network net = cascade();
  RatVector k(4, Rational(1));
  auto cc = compatibility_class(net, k, {1.0, 2.0}, true);
  CHECK(cc.point == std::vector<double>{1.0, 2.0});
  for (std::size_t a = 0; a < cc.basis.size(); ++a)
    for (std::size_t b = 0; b < cc.basis.size(); ++b) {
      double dot = 0;
      for (std::size_t j = 0; j < cc.basis[a].size(); ++j) dot += cc.basis[a][j] * cc.basis[b][j];
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-12);
    }
}
