#pragma once

#include "crn/model.hpp"
#include "crn/ratlinalg.hpp"

#include <vector>

namespace crn {

/// Directed graph over the n distinct complexes; one weighted edge per reaction.
struct ComplexGraph {
  std::size_t node_count = 0;
  struct Edge {
    std::size_t from, to;
    Rational weight;
  };
  std::vector<Edge> edges;

  static ComplexGraph of(const Network& net);
  std::vector<std::vector<std::size_t>> adjacency() const;
};

/// True iff a directed path from i to j exists (has_path(i, i) is true).
bool has_path(const ComplexGraph& g, std::size_t i, std::size_t j);

/// Strongly connected component id per node (Tarjan, deterministic ids).
std::vector<std::size_t> strongly_connected_components(const ComplexGraph& g);

/// Every edge lies within a strongly connected component.
bool is_weakly_reversible(const Network& net);

/// Connected components of the underlying undirected complex graph,
/// each sorted ascending; classes ordered by smallest member.
std::vector<std::vector<std::size_t>> linkage_classes(const Network& net);

struct SubspaceReport {
  RatMatrix stoich_basis;
  RatMatrix kinetic_basis;
  std::size_t s = 0;
  std::size_t s_star = 0;
};

/// Exact basis and rank of span{ z_i' - z_i }.
SubspaceReport stoichiometric_subspace(const Network& net);

/// Exact kinetic subspace: span of the aggregated per-reactant-complex
/// vectors sum_{i : C_i = C^0} k_i (z_i' - z_i). Monomials of distinct
/// reactant complexes are linearly independent on the positive orthant,
/// so this equals im(f). Fills both parts of the report.
SubspaceReport kinetic_subspace(const Network& net, const RatVector& k);

/// Convenience overload using the rates stored in the network.
SubspaceReport kinetic_subspace(const Network& net);

/// Affine descriptor x0 + span(basis) of the invariant class through x0.
struct CompatibilityClass {
  std::vector<double> point;
  std::vector<std::vector<double>> basis;  // orthonormal, one vector per dim
};

CompatibilityClass compatibility_class(const Network& net, const RatVector& k,
                                       const std::vector<double>& x0, bool use_kinetic);

class StructureError : public std::runtime_error {
public:
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
