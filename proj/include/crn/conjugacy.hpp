#pragma once

#include "crn/dynamics.hpp"
#include "crn/lp.hpp"
#include "crn/model.hpp"

#include <optional>
#include <vector>

namespace crn {

/// Witness of linear conjugacy: h(x) = T^{-1} x with T = diag(c), target rate
/// constants k_tilde_i = b_i prod_j c_j^{z_ij}. All entries exact rationals,
/// so the defining per-reactant-complex identity holds with zero residual.
struct ConjugacyWitness {
  RatVector c;                            // length m
  RatVector b;                            // one per target reaction
  RatVector k_tilde;                      // one per target reaction
  std::vector<std::size_t> permutation;   // species relabeling, identity by default
  std::size_t solution_cone_dim = 0;
};

/// The linearized feasibility system in variables (b_1..b_rt, u_j = 1/c_j).
/// Species whose u never receives a nonzero coefficient are fixed to u = 1;
/// with identity_scaling every u is fixed and the system becomes affine in b.
struct ConjugacySystem {
  std::size_t num_b = 0;
  std::size_t num_vars = 0;               // b columns then active u columns
  std::vector<long> u_col_of_species;     // -1 when fixed to 1
  RatMatrix eq;                           // equality rows over the variables
  RatVector rhs;                          // all zero unless identity_scaling
  bool identity_scaling = false;
};

struct ConjugacyOptions {
  bool identity_scaling = false;
};

ConjugacySystem build_conjugacy_system(const Network& original, const RatVector& k,
                                       const Network& target, const ConjugacyOptions& opts = {});

/// Strict-positive solution of the system, normalized so that min_j c_j = 1
/// (no rescaling in identity mode). nullopt when infeasible.
std::optional<RatVector> solve_system_strict(const ConjugacySystem& sys);

/// Nullspace of the homogeneous part; its dimension is the solution cone dim.
RatMatrix system_nullspace(const ConjugacySystem& sys);

ConjugacyWitness witness_from_solution(const ConjugacySystem& sys, const Network& target,
                                       const RatVector& x);

/// Decide linear conjugacy of (original, k) to the target structure; target
/// rate constants are outputs. Networks must share the species list.
std::optional<ConjugacyWitness> solve_conjugacy(const Network& original, const RatVector& k,
                                                const Network& target,
                                                const ConjugacyOptions& opts = {});

/// As above but additionally trying every species permutation (m <= 6).
std::optional<ConjugacyWitness> solve_conjugacy_permuted(const Network& original,
                                                         const RatVector& k,
                                                         const Network& target);

/// Exact product per target reaction: k_tilde_i = b_i prod_j c_j^{z_ij}.
RatVector transform_rates(const RatVector& b, const RatVector& c, const Network& target);

/// One reactant complex's cone comparison data.
struct ConeQuery {
  RatMatrix generators_original;  // reaction vectors (scaled by k where relevant)
  RatMatrix generators_target;
  RatVector scaling;              // diagonal of T, length m
};

/// Strict feasibility of  sum alpha v = T sum beta w  with alpha, beta > 0.
/// An empty generator list contributes the zero vector.
bool cones_intersect(const ConeQuery& q);

/// Every original generator individually lies in T C' with strictly positive
/// coefficients; vacuously true when the original side is empty.
bool cone_contains(const ConeQuery& q);

/// Same reactant complexes and per-complex cone intersection with T = I.
bool craciun_pantea_check(const Network& original, const Network& target);

/// True iff the matrix is a positively weighted permutation matrix.
bool validate_linear_map(const std::vector<std::vector<double>>& matrix);

struct ConjugacyVerification {
  double max_deviation = 0.0;
  bool passed = false;
  TrajectoryStatus original_status = TrajectoryStatus::Completed;
  TrajectoryStatus target_status = TrajectoryStatus::Completed;
};

/// Integrates both flows on a shared grid and compares T^{-1} Phi(x0, t)
/// against Psi(T^{-1} x0, t) in the sup norm.
ConjugacyVerification verify_conjugacy_numerically(const OdeSystem& original,
                                                   const OdeSystem& target,
                                                   const ConjugacyWitness& witness, const Vec& x0,
                                                   double t_end, double tol,
                                                   std::size_t grid_points = 101);

class ConjugacyError : public std::runtime_error {
public:
  explicit ConjugacyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
