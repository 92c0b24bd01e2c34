#include "crn/structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>

namespace crn {

ComplexGraph ComplexGraph::of(const Network& net) {
  ComplexGraph g;
  g.node_count = net.complex_count();
  for (std::size_t i = 0; i < net.reaction_count(); ++i)
    g.edges.push_back({net.reactant_index(i), net.product_index(i), net.reactions()[i].rate});
  return g;
}

std::vector<std::vector<std::size_t>> ComplexGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(node_count);
  for (const Edge& e : edges) adj[e.from].push_back(e.to);
  return adj;
}

bool has_path(const ComplexGraph& g, std::size_t i, std::size_t j) {
  if (i >= g.node_count || j >= g.node_count)
    throw StructureError("complex index out of range");
  if (i == j) return true;
  auto adj = g.adjacency();
  std::vector<bool> seen(g.node_count, false);
  std::vector<std::size_t> stack{i};
  seen[i] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (w == j) return true;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

std::vector<std::size_t> strongly_connected_components(const ComplexGraph& g) {
  auto adj = g.adjacency();
  std::size_t n = g.node_count;
  std::vector<std::size_t> comp(n, SIZE_MAX), index(n, SIZE_MAX), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_comp = 0;

  // Iterative Tarjan.
  struct Frame {
    std::size_t v;
    std::size_t child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        std::size_t w = adj[f.v][f.child++];
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == f.v) break;
          }
          ++next_comp;
        }
        std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

bool is_weakly_reversible(const Network& net) {
  ComplexGraph g = ComplexGraph::of(net);
  auto comp = strongly_connected_components(g);
  for (const auto& e : g.edges)
    if (comp[e.from] != comp[e.to]) return false;
  return true;
}

std::vector<std::vector<std::size_t>> linkage_classes(const Network& net) {
  ComplexGraph g = ComplexGraph::of(net);
  std::vector<std::vector<std::size_t>> undirected(g.node_count);
  for (const auto& e : g.edges) {
    undirected[e.from].push_back(e.to);
    undirected[e.to].push_back(e.from);
  }
  std::vector<std::size_t> comp(g.node_count, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t v = 0; v < g.node_count; ++v) {
    if (comp[v] != SIZE_MAX) continue;
    std::vector<std::size_t> stack{v};
    comp[v] = next;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w : undirected[u])
        if (comp[w] == SIZE_MAX) {
          comp[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  std::vector<std::vector<std::size_t>> classes(next);
  for (std::size_t v = 0; v < g.node_count; ++v) classes[comp[v]].push_back(v);
  for (auto& c : classes) std::sort(c.begin(), c.end());
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

SubspaceReport stoichiometric_subspace(const Network& net) {
  RatMatrix rows;
  for (std::size_t i = 0; i < net.reaction_count(); ++i) rows.push_back(net.reaction_vector(i));
  SubspaceReport rep;
  rep.stoich_basis = row_basis(std::move(rows));
  rep.s = rep.stoich_basis.size();
  return rep;
}

SubspaceReport kinetic_subspace(const Network& net, const RatVector& k) {
  if (k.size() != net.reaction_count())
    throw StructureError("rate vector length does not match reaction count");
  SubspaceReport rep = stoichiometric_subspace(net);
  RatMatrix rows;
  for (std::size_t ci : net.reactant_complex_indices()) {
    RatVector agg(net.species_count(), Rational(0));
    for (std::size_t i = 0; i < net.reaction_count(); ++i) {
      if (net.reactant_index(i) != ci) continue;
      RatVector v = net.reaction_vector(i);
      for (std::size_t j = 0; j < agg.size(); ++j) agg[j] += k[i] * v[j];
    }
    rows.push_back(std::move(agg));
  }
  rep.kinetic_basis = row_basis(std::move(rows));
  rep.s_star = rep.kinetic_basis.size();
  return rep;
}

SubspaceReport kinetic_subspace(const Network& net) {
  RatVector k;
  for (const Reaction& rx : net.reactions()) k.push_back(rx.rate);
  return kinetic_subspace(net, k);
}

CompatibilityClass compatibility_class(const Network& net, const RatVector& k,
                                       const std::vector<double>& x0, bool use_kinetic) {
  if (x0.size() != net.species_count())
    throw StructureError("initial point length does not match species count");
  for (double v : x0)
    if (v <= 0) throw StructureError("initial point must be strictly positive");

  SubspaceReport rep = kinetic_subspace(net, k);
  const RatMatrix& basis = use_kinetic ? rep.kinetic_basis : rep.stoich_basis;

  CompatibilityClass out;
  out.point = x0;
  if (basis.empty()) return out;

  std::size_t m = net.species_count();
  Eigen::MatrixXd b(m, basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (std::size_t r = 0; r < m; ++r) b(r, c) = to_double(basis[c][r]);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, basis.size());
  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    std::vector<double> col(m);
    for (std::size_t r = 0; r < m; ++r) col[r] = q(r, c);
    out.basis.push_back(std::move(col));
  }
  return out;
}

}  // namespace crn
