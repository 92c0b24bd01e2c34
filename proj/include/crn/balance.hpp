#pragma once

#include "crn/dynamics.hpp"

#include <optional>
#include <vector>

namespace crn {

struct BalanceControls {
  double tol_bal = 1e-8;
  double residual_tol = 1e-8;
};

struct BalanceCertificate {
  std::vector<double> kernel;          // positive Kirchhoff kernel, one entry per distinct complex
  std::optional<Vec> log_solution;     // mu with x* = exp(mu)
  std::optional<Vec> equilibrium;      // exp(mu), when balanced
  double residual = 0.0;               // log-linear membership residual (inf norm)
  bool weakly_reversible = false;
  bool balanced = false;
};

/// Pointwise test of the complex-balance condition at x.
bool is_complex_balanced_at(const OdeSystem& sys, const Vec& x,
                            const BalanceControls& controls = {});

/// Constructs the positive Kirchhoff kernel per linkage class (matrix-tree
/// minors) and tests whether it is of the form (x^{z_i})_i by solving the
/// log-linear system Z mu = ln psi + per-class offsets in least squares.
BalanceCertificate find_complex_balanced_equilibrium(const OdeSystem& sys,
                                                     const BalanceControls& controls = {});

/// One complex-balanced equilibrium lifts to the whole system.
bool is_complex_balanced_system(const OdeSystem& sys, const BalanceControls& controls = {});

/// Lightweight overload used by the target search's parameter sweep.
BalanceCertificate find_complex_balanced_equilibrium(const Network& net, const Vec& k,
                                                     const BalanceControls& controls = {});

}  // namespace crn
