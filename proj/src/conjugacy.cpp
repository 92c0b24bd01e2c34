#include "crn/conjugacy.hpp"

#include "crn/ratlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crn {

namespace {

Rational pow_rational(const Rational& base, long exp) {
  Rational p(1);
  for (long e = 0; e < exp; ++e) p *= base;
  return p;
}

// Reactant complexes of the original followed by target-only ones ("phantoms").
std::vector<Complex> reactant_union(const Network& original, const Network& target) {
  std::vector<Complex> out;
  auto push_unique = [&out](const Complex& c) {
    for (const Complex& seen : out)
      if (seen == c) return;
    out.push_back(c);
  };
  for (std::size_t ci : original.reactant_complex_indices())
    push_unique(original.distinct_complexes()[ci]);
  for (std::size_t ci : target.reactant_complex_indices())
    push_unique(target.distinct_complexes()[ci]);
  return out;
}

RatVector aggregated_outflow(const Network& net, const RatVector& k, const Complex& c) {
  RatVector l(net.species_count(), Rational(0));
  for (std::size_t i = 0; i < net.reaction_count(); ++i) {
    if (!(net.reactions()[i].reactant == c)) continue;
    RatVector v = net.reaction_vector(i);
    for (std::size_t j = 0; j < l.size(); ++j) l[j] += k[i] * v[j];
  }
  return l;
}

}  // namespace

ConjugacySystem build_conjugacy_system(const Network& original, const RatVector& k,
                                       const Network& target, const ConjugacyOptions& opts) {
  if (original.species().names != target.species().names)
    throw ConjugacyError("species mismatch between original and target network");
  if (k.size() != original.reaction_count())
    throw ConjugacyError("rate vector length does not match original reaction count");
  for (const Rational& q : k)
    if (q <= 0) throw ConjugacyError("rate constants must be positive");

  std::size_t m = original.species_count();
  ConjugacySystem sys;
  sys.identity_scaling = opts.identity_scaling;
  sys.num_b = target.reaction_count();

  std::vector<Complex> complexes = reactant_union(original, target);
  RatMatrix outflow;
  for (const Complex& c : complexes) outflow.push_back(aggregated_outflow(original, k, c));

  sys.u_col_of_species.assign(m, -1);
  if (!opts.identity_scaling) {
    std::size_t next = sys.num_b;
    for (std::size_t j = 0; j < m; ++j) {
      bool active = false;
      for (const RatVector& l : outflow)
        if (l[j] != 0) active = true;
      if (active) sys.u_col_of_species[j] = static_cast<long>(next++);
    }
    sys.num_vars = next;
  } else {
    sys.num_vars = sys.num_b;
  }

  for (std::size_t ci = 0; ci < complexes.size(); ++ci) {
    for (std::size_t j = 0; j < m; ++j) {
      RatVector row(sys.num_vars, Rational(0));
      Rational rhs(0);
      for (std::size_t i = 0; i < target.reaction_count(); ++i) {
        if (!(target.reactions()[i].reactant == complexes[ci])) continue;
        row[i] = target.reaction_vector(i)[j];
      }
      if (opts.identity_scaling) {
        rhs = outflow[ci][j];
      } else if (sys.u_col_of_species[j] >= 0) {
        row[static_cast<std::size_t>(sys.u_col_of_species[j])] = -outflow[ci][j];
      }
      bool all_zero = std::all_of(row.begin(), row.end(), [](const Rational& q) { return q == 0; });
      if (all_zero && rhs == 0) continue;
      sys.eq.push_back(std::move(row));
      sys.rhs.push_back(std::move(rhs));
    }
  }
  return sys;
}

std::optional<RatVector> solve_system_strict(const ConjugacySystem& sys) {
  // max delta  s.t.  eq rows,  x_i - delta >= 0,  x_i <= box,  x, delta >= 0.
  lp::Problem problem;
  problem.num_vars = sys.num_vars + 1;
  std::size_t delta = sys.num_vars;
  problem.objective.assign(problem.num_vars, Rational(0));
  problem.objective[delta] = 1;

  Rational box(1);
  if (sys.identity_scaling) {
    Rational top(0);
    for (const Rational& r : sys.rhs)
      if (boost::multiprecision::abs(r) > top) top = boost::multiprecision::abs(r);
    box = Rational(1024) * (Rational(1) + top);
  }

  for (std::size_t r = 0; r < sys.eq.size(); ++r) {
    RatVector row(problem.num_vars, Rational(0));
    for (std::size_t j = 0; j < sys.num_vars; ++j) row[j] = sys.eq[r][j];
    problem.add_row(std::move(row), lp::Relation::Eq, sys.rhs[r]);
  }
  for (std::size_t j = 0; j < sys.num_vars; ++j) {
    RatVector lower(problem.num_vars, Rational(0));
    lower[j] = 1;
    lower[delta] = -1;
    problem.add_row(std::move(lower), lp::Relation::Ge, Rational(0));
    RatVector upper(problem.num_vars, Rational(0));
    upper[j] = 1;
    problem.add_row(std::move(upper), lp::Relation::Le, box);
  }

  lp::Result res = lp::solve(problem);
  if (res.status != lp::Status::Optimal || res.objective <= 0) return std::nullopt;

  RatVector x(res.x.begin(), res.x.begin() + sys.num_vars);
  if (!sys.identity_scaling) {
    // Normalize the scaling freedom so that min_j c_j = 1 (max active u = 1).
    Rational umax(0);
    for (long col : sys.u_col_of_species)
      if (col >= 0 && x[static_cast<std::size_t>(col)] > umax)
        umax = x[static_cast<std::size_t>(col)];
    if (umax > 0)
      for (Rational& v : x) v /= umax;
  }
  return x;
}

RatMatrix system_nullspace(const ConjugacySystem& sys) {
  return nullspace(sys.eq, sys.num_vars);
}

ConjugacyWitness witness_from_solution(const ConjugacySystem& sys, const Network& target,
                                       const RatVector& x) {
  ConjugacyWitness w;
  std::size_t m = sys.u_col_of_species.size();
  w.c.assign(m, Rational(1));
  for (std::size_t j = 0; j < m; ++j)
    if (sys.u_col_of_species[j] >= 0)
      w.c[j] = Rational(1) / x[static_cast<std::size_t>(sys.u_col_of_species[j])];
  w.b.assign(x.begin(), x.begin() + sys.num_b);
  w.k_tilde = transform_rates(w.b, w.c, target);
  w.permutation.resize(m);
  std::iota(w.permutation.begin(), w.permutation.end(), 0);
  w.solution_cone_dim = system_nullspace(sys).size();
  return w;
}

std::optional<ConjugacyWitness> solve_conjugacy(const Network& original, const RatVector& k,
                                                const Network& target,
                                                const ConjugacyOptions& opts) {
  ConjugacySystem sys = build_conjugacy_system(original, k, target, opts);
  auto x = solve_system_strict(sys);
  if (!x) return std::nullopt;
  return witness_from_solution(sys, target, *x);
}

std::optional<ConjugacyWitness> solve_conjugacy_permuted(const Network& original,
                                                         const RatVector& k,
                                                         const Network& target) {
  std::size_t m = original.species_count();
  if (m > 6) throw ConjugacyError("permutation search supports at most 6 species");
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // Relabel the original so new species j is old species perm[j].
    std::vector<Reaction> reactions;
    for (const Reaction& rx : original.reactions()) {
      Complex reac, prod;
      reac.coeffs.resize(m);
      prod.coeffs.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        reac.coeffs[j] = rx.reactant.coeffs[perm[j]];
        prod.coeffs[j] = rx.product.coeffs[perm[j]];
      }
      reactions.push_back({reac, prod, rx.rate});
    }
    Network permuted(original.species(), std::move(reactions));
    auto w = solve_conjugacy(permuted, k, target);
    if (w) {
      w->permutation = perm;
      return w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

RatVector transform_rates(const RatVector& b, const RatVector& c, const Network& target) {
  if (b.size() != target.reaction_count())
    throw ConjugacyError("b length does not match target reaction count");
  if (c.size() != target.species_count())
    throw ConjugacyError("c length does not match species count");
  for (const Rational& v : b)
    if (v <= 0) throw ConjugacyError("b entries must be positive");
  for (const Rational& v : c)
    if (v <= 0) throw ConjugacyError("c entries must be positive");
  RatVector kt;
  for (std::size_t i = 0; i < target.reaction_count(); ++i) {
    Rational prod = b[i];
    const Complex& z = target.reactions()[i].reactant;
    for (std::size_t j = 0; j < c.size(); ++j) prod *= pow_rational(c[j], z.coeffs[j]);
    kt.push_back(std::move(prod));
  }
  return kt;
}

namespace {

// max delta s.t. the homogeneous/affine combination matches, vars >= delta.
// Strict feasibility shows up as either delta* > 0 or an unbounded ray.
bool strict_combination_exists(const RatMatrix& lhs_gens, const RatMatrix& rhs_gens,
                               const RatVector& scaling, const RatVector* fixed_lhs) {
  std::size_t m = scaling.size();
  std::size_t n1 = fixed_lhs ? 0 : lhs_gens.size();
  std::size_t n2 = rhs_gens.size();
  if (n1 + n2 == 0) {
    if (!fixed_lhs) return true;  // 0 = 0
    for (const Rational& v : *fixed_lhs)
      if (v != 0) return false;
    return true;
  }
  lp::Problem problem;
  problem.num_vars = n1 + n2 + 1;
  std::size_t delta = n1 + n2;
  problem.objective.assign(problem.num_vars, Rational(0));
  problem.objective[delta] = 1;
  for (std::size_t j = 0; j < m; ++j) {
    RatVector row(problem.num_vars, Rational(0));
    for (std::size_t i = 0; i < n1; ++i) row[i] = lhs_gens[i][j];
    for (std::size_t i = 0; i < n2; ++i) row[n1 + i] = -scaling[j] * rhs_gens[i][j];
    // Row reads  sum alpha v - sum beta (c w) = -g  with g on the lhs.
    problem.add_row(std::move(row), lp::Relation::Eq,
                    fixed_lhs ? -(*fixed_lhs)[j] : Rational(0));
  }
  for (std::size_t i = 0; i < n1 + n2; ++i) {
    RatVector row(problem.num_vars, Rational(0));
    row[i] = 1;
    row[delta] = -1;
    problem.add_row(std::move(row), lp::Relation::Ge, Rational(0));
  }
  lp::Result res = lp::solve(problem);
  if (res.status == lp::Status::Unbounded) return true;
  return res.status == lp::Status::Optimal && res.objective > 0;
}

}  // namespace

bool cones_intersect(const ConeQuery& q) {
  return strict_combination_exists(q.generators_original, q.generators_target, q.scaling, nullptr);
}

bool cone_contains(const ConeQuery& q) {
  for (const RatVector& g : q.generators_original) {
    if (!strict_combination_exists({}, q.generators_target, q.scaling, &g)) return false;
  }
  return true;
}

bool craciun_pantea_check(const Network& original, const Network& target) {
  auto reactants = [](const Network& net) {
    std::vector<Complex> out;
    for (std::size_t ci : net.reactant_complex_indices())
      out.push_back(net.distinct_complexes()[ci]);
    return out;
  };
  std::vector<Complex> ra = reactants(original), rb = reactants(target);
  auto subset = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    for (const Complex& c : a)
      if (std::find(b.begin(), b.end(), c) == b.end()) return false;
    return true;
  };
  if (!subset(ra, rb) || !subset(rb, ra)) return false;

  RatVector ones(original.species_count(), Rational(1));
  for (const Complex& c : ra) {
    ConeQuery q;
    q.scaling = ones;
    for (std::size_t i = 0; i < original.reaction_count(); ++i)
      if (original.reactions()[i].reactant == c)
        q.generators_original.push_back(original.reaction_vector(i));
    for (std::size_t i = 0; i < target.reaction_count(); ++i)
      if (target.reactions()[i].reactant == c)
        q.generators_target.push_back(target.reaction_vector(i));
    if (!cones_intersect(q)) return false;
  }
  return true;
}

bool validate_linear_map(const std::vector<std::vector<double>>& matrix) {
  std::size_t m = matrix.size();
  if (m == 0) return false;
  for (const auto& row : matrix)
    if (row.size() != m) return false;
  std::vector<int> col_hits(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    int row_hits = 0;
    for (std::size_t c = 0; c < m; ++c) {
      double v = matrix[r][c];
      if (v < 0) return false;
      if (v > 0) {
        ++row_hits;
        ++col_hits[c];
      }
    }
    if (row_hits != 1) return false;
  }
  for (int hits : col_hits)
    if (hits != 1) return false;
  return true;
}

ConjugacyVerification verify_conjugacy_numerically(const OdeSystem& original,
                                                   const OdeSystem& target,
                                                   const ConjugacyWitness& witness, const Vec& x0,
                                                   double t_end, double tol,
                                                   std::size_t grid_points) {
  std::size_t m = original.species_count();
  auto h = [&](const Vec& x) {
    Vec y(m);
    for (std::size_t j = 0; j < m; ++j)
      y[j] = x[witness.permutation[j]] / to_double(witness.c[j]);
    return y;
  };
  std::vector<double> grid;
  for (std::size_t i = 1; i < grid_points; ++i)
    grid.push_back(t_end * static_cast<double>(i) / static_cast<double>(grid_points - 1));

  ConjugacyVerification out;
  Trajectory phi = integrate_grid(original, x0, grid);
  Trajectory psi = integrate_grid(target, h(x0), grid);
  out.original_status = phi.status;
  out.target_status = psi.status;
  std::size_t shared = std::min(phi.states.size(), psi.states.size());
  for (std::size_t i = 0; i < shared; ++i) {
    Vec mapped = h(phi.states[i]);
    for (std::size_t j = 0; j < m; ++j)
      out.max_deviation = std::max(out.max_deviation, std::abs(mapped[j] - psi.states[i][j]));
  }
  out.passed = phi.status == TrajectoryStatus::Completed &&
               psi.status == TrajectoryStatus::Completed && out.max_deviation < tol;
  return out;
}

}  // namespace crn
