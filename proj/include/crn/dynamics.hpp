#pragma once

#include "crn/model.hpp"
#include "crn/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crn {

using Vec = std::vector<double>;

/// A mass-action system: network plus a positive rate vector. Rates are kept
/// both exactly (for the algebraic modules) and as doubles (for integration).
class OdeSystem {
public:
  OdeSystem(Network net, RatVector k);

  static OdeSystem from_doubles(Network net, const Vec& k);

  const Network& network() const { return net_; }
  const RatVector& rates_exact() const { return k_exact_; }
  const Vec& rates() const { return k_; }
  std::size_t species_count() const { return net_.species_count(); }

private:
  Network net_;
  RatVector k_exact_;
  Vec k_;
};

/// Right-hand side f(x) of dx/dt = sum_i k_i (z_i' - z_i) x^{z_i}.
Vec rhs(const OdeSystem& sys, const Vec& x);

/// Analytic Jacobian, entry (a,b) = sum_i k_i (z_i'-z_i)_a z_ib x^{z_i} / x_b.
std::vector<Vec> jacobian(const OdeSystem& sys, const Vec& x);

struct IntegrationControls {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 1e-4;
  double min_step = 1e-14;
  double divergence_bound = 1e8;
};

enum class TrajectoryStatus { Completed, PositivityLoss, Diverged, StepUnderflow };

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  IntegrationControls controls;
};

/// Adaptive Dormand-Prince RK5(4). Halts (with a flag) if positivity is lost
/// or the state diverges past controls.divergence_bound.
Trajectory integrate(const OdeSystem& sys, const Vec& x0, double t_end,
                     const IntegrationControls& controls = {});

/// Integrate hitting each grid time exactly; grid must be increasing from 0.
Trajectory integrate_grid(const OdeSystem& sys, const Vec& x0, const std::vector<double>& grid,
                          const IntegrationControls& controls = {});

std::string trajectory_csv(const OdeSystem& sys, const Trajectory& tr);

struct EquilibriumControls {
  double tol_eq = 1e-10;
  int max_newton_iterations = 100;
  double seed_time = 20.0;
  IntegrationControls integration;
};

/// Damped Newton on f restricted to the kinetic compatibility class of x0,
/// seeded from the endpoint of a short integration.
std::optional<Vec> find_equilibrium(const OdeSystem& sys, const Vec& x0,
                                    const EquilibriumControls& controls = {});

enum class StabilityClass { LocallyStableInClass, Unstable, Inconclusive };

struct StabilityVerdict {
  std::optional<Vec> equilibrium;
  std::vector<double> eigen_real_parts;  // Jacobian restricted to S*, sorted descending
  StabilityClass classification = StabilityClass::Inconclusive;
  bool uniqueness_refuted = false;       // multi-start probe found a second equilibrium
  std::size_t multistart_hits = 0;
};

struct StabilityControls {
  double tol_eig = 1e-8;
  int multistart_seeds = 20;
  unsigned long long seed = 42;
  EquilibriumControls equilibrium;
};

StabilityVerdict classify_stability(const OdeSystem& sys, const Vec& x0,
                                    const StabilityControls& controls = {});

class DynamicsError : public std::runtime_error {
public:
  explicit DynamicsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
