#include "crn/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace crn {

OdeSystem::OdeSystem(Network net, RatVector k) : net_(std::move(net)), k_exact_(std::move(k)) {
  if (k_exact_.size() != net_.reaction_count())
    throw DynamicsError("rate vector length does not match reaction count");
  for (const Rational& q : k_exact_) {
    if (q <= 0) throw DynamicsError("rate constants must be positive");
    k_.push_back(to_double(q));
  }
}

OdeSystem OdeSystem::from_doubles(Network net, const Vec& k) {
  RatVector kq;
  for (double v : k) kq.push_back(rational_from_double(v));
  return OdeSystem(std::move(net), std::move(kq));
}

namespace {

void check_positive(const OdeSystem& sys, const Vec& x) {
  if (x.size() != sys.species_count()) throw DynamicsError("state dimension mismatch");
  for (double v : x)
    if (!(v > 0)) throw DynamicsError("state must be strictly positive");
}

double monomial(const Complex& z, const Vec& x) {
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (long e = 0; e < z.coeffs[j]; ++e) p *= x[j];
  return p;
}

}  // namespace

Vec rhs(const OdeSystem& sys, const Vec& x) {
  check_positive(sys, x);
  const Network& net = sys.network();
  Vec f(net.species_count(), 0.0);
  for (std::size_t i = 0; i < net.reaction_count(); ++i) {
    const Reaction& rx = net.reactions()[i];
    double flux = sys.rates()[i] * monomial(rx.reactant, x);
    for (std::size_t j = 0; j < f.size(); ++j)
      f[j] += flux * static_cast<double>(rx.product.coeffs[j] - rx.reactant.coeffs[j]);
  }
  return f;
}

std::vector<Vec> jacobian(const OdeSystem& sys, const Vec& x) {
  check_positive(sys, x);
  const Network& net = sys.network();
  std::size_t m = net.species_count();
  std::vector<Vec> jac(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < net.reaction_count(); ++i) {
    const Reaction& rx = net.reactions()[i];
    double flux = sys.rates()[i] * monomial(rx.reactant, x);
    for (std::size_t b = 0; b < m; ++b) {
      if (rx.reactant.coeffs[b] == 0) continue;
      double d = flux * static_cast<double>(rx.reactant.coeffs[b]) / x[b];
      for (std::size_t a = 0; a < m; ++a)
        jac[a][b] += d * static_cast<double>(rx.product.coeffs[a] - rx.reactant.coeffs[a]);
    }
  }
  return jac;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Stepper {
  const OdeSystem& sys;
  const IntegrationControls& ctl;
  Vec x;
  double t = 0.0;
  double h;
  TrajectoryStatus status = TrajectoryStatus::Completed;

  Stepper(const OdeSystem& s, Vec x0, const IntegrationControls& c)
      : sys(s), ctl(c), x(std::move(x0)), h(c.initial_step) {}

  static Vec axpy(const Vec& base, double hh, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = base;
    for (auto [c, k] : terms)
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += hh * c * (*k)[j];
    return out;
  }

  // Advance to exactly t_target; false on failure (status says why).
  bool advance_to(double t_target) {
    while (t < t_target) {
      if (h < ctl.min_step) {
        status = TrajectoryStatus::StepUnderflow;
        return false;
      }
      double hh = std::min(h, t_target - t);
      Vec k1, k2, k3, k4, k5, k6, k7, xt, err;
      bool positive = true;
      try {
        k1 = rhs(sys, x);
        k2 = rhs(sys, axpy(x, hh, {{A21, &k1}}));
        k3 = rhs(sys, axpy(x, hh, {{A31, &k1}, {A32, &k2}}));
        k4 = rhs(sys, axpy(x, hh, {{A41, &k1}, {A42, &k2}, {A43, &k3}}));
        k5 = rhs(sys, axpy(x, hh, {{A51, &k1}, {A52, &k2}, {A53, &k3}, {A54, &k4}}));
        k6 = rhs(sys, axpy(x, hh, {{A61, &k1}, {A62, &k2}, {A63, &k3}, {A64, &k4}, {A65, &k5}}));
        xt = axpy(x, hh, {{B1, &k1}, {B3, &k3}, {B4, &k4}, {B5, &k5}, {B6, &k6}});
        for (double v : xt)
          if (!(v > 0)) positive = false;
        if (positive) k7 = rhs(sys, xt);
      } catch (const DynamicsError&) {
        positive = false;
      }
      if (!positive) {
        h = hh * 0.5;
        if (h < ctl.min_step) {
          status = TrajectoryStatus::PositivityLoss;
          return false;
        }
        continue;
      }
      double err_norm = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        double e = hh * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] +
                         E7 * k7[j]);
        double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(x[j]), std::abs(xt[j]));
        err_norm = std::max(err_norm, std::abs(e) / scale);
      }
      if (err_norm <= 1.0) {
        t += hh;
        x = std::move(xt);
        double grow = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
        h = hh * std::clamp(grow, 0.2, 5.0);
        for (double v : x) {
          if (std::abs(v) > ctl.divergence_bound || !std::isfinite(v)) {
            status = TrajectoryStatus::Diverged;
            return false;
          }
        }
      } else {
        h = hh * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
      }
    }
    return true;
  }
};

}  // namespace

Trajectory integrate(const OdeSystem& sys, const Vec& x0, double t_end,
                     const IntegrationControls& controls) {
  if (!(t_end > 0)) throw DynamicsError("t_end must be positive");
  check_positive(sys, x0);
  // Uniform sample grid dense enough for downstream checks.
  std::vector<double> grid;
  const int samples = 200;
  for (int i = 1; i <= samples; ++i) grid.push_back(t_end * i / samples);
  return integrate_grid(sys, x0, grid, controls);
}

Trajectory integrate_grid(const OdeSystem& sys, const Vec& x0, const std::vector<double>& grid,
                          const IntegrationControls& controls) {
  check_positive(sys, x0);
  Trajectory tr;
  tr.controls = controls;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  Stepper st(sys, x0, controls);
  for (double tg : grid) {
    if (!(tg > st.t)) throw DynamicsError("grid times must be increasing and positive");
    if (!st.advance_to(tg)) {
      tr.status = st.status;
      return tr;
    }
    tr.times.push_back(tg);
    tr.states.push_back(st.x);
  }
  tr.status = TrajectoryStatus::Completed;
  return tr;
}

std::string trajectory_csv(const OdeSystem& sys, const Trajectory& tr) {
  std::ostringstream os;
  os.precision(15);
  os << "t";
  for (const std::string& n : sys.network().species().names) os << "," << n;
  os << "\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << tr.times[i];
    for (double v : tr.states[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

namespace {

Eigen::MatrixXd kinetic_frame(const OdeSystem& sys, const Vec& x0) {
  CompatibilityClass cls =
      compatibility_class(sys.network(), sys.rates_exact(), x0, /*use_kinetic=*/true);
  std::size_t m = sys.species_count();
  Eigen::MatrixXd q(m, cls.basis.size());
  for (std::size_t c = 0; c < cls.basis.size(); ++c)
    for (std::size_t r = 0; r < m; ++r) q(r, c) = cls.basis[c][r];
  return q;
}

double inf_norm(const Vec& v) {
  double n = 0;
  for (double a : v) n = std::max(n, std::abs(a));
  return n;
}

std::optional<Vec> newton_in_class(const OdeSystem& sys, Vec x, const Eigen::MatrixXd& q,
                                   const EquilibriumControls& ctl) {
  std::size_t m = sys.species_count();
  if (q.cols() == 0) return x;  // zero-dimensional class: x0 itself
  for (int it = 0; it < ctl.max_newton_iterations; ++it) {
    Vec f = rhs(sys, x);
    if (inf_norm(f) < ctl.tol_eq) return x;
    auto jac = jacobian(sys, x);
    Eigen::MatrixXd jm(m, m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) jm(a, b) = jac[a][b];
    Eigen::VectorXd fv(m);
    for (std::size_t a = 0; a < m; ++a) fv(a) = f[a];
    Eigen::MatrixXd jr = q.transpose() * jm * q;
    Eigen::VectorXd fr = q.transpose() * fv;
    Eigen::VectorXd dy = jr.fullPivLu().solve(-fr);
    if (!dy.allFinite()) return std::nullopt;
    Eigen::VectorXd dx = q * dy;
    // Damping by halving with a positivity guard.
    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half, lambda *= 0.5) {
      Vec xn(m);
      bool pos = true;
      for (std::size_t a = 0; a < m; ++a) {
        xn[a] = x[a] + lambda * dx(a);
        if (!(xn[a] > 0)) pos = false;
      }
      if (!pos) continue;
      Vec fn = rhs(sys, xn);
      if (inf_norm(fn) < inf_norm(f) || lambda < 1e-12) {
        x = std::move(xn);
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::nullopt;
  }
  Vec f = rhs(sys, x);
  if (inf_norm(f) < ctl.tol_eq) return x;
  return std::nullopt;
}

}  // namespace

std::optional<Vec> find_equilibrium(const OdeSystem& sys, const Vec& x0,
                                    const EquilibriumControls& controls) {
  check_positive(sys, x0);
  Eigen::MatrixXd q = kinetic_frame(sys, x0);
  // Seed from the endpoint of a short integration; fall back to x0 if the
  // integration fails early (e.g. unbounded trajectories).
  IntegrationControls ic = controls.integration;
  ic.rel_tol = std::max(ic.rel_tol, 1e-8);
  Trajectory tr = integrate(sys, x0, controls.seed_time, ic);
  Vec seed = tr.states.empty() ? x0 : tr.states.back();
  if (tr.status == TrajectoryStatus::Diverged) return std::nullopt;
  auto eq = newton_in_class(sys, seed, q, controls);
  if (!eq) eq = newton_in_class(sys, x0, q, controls);
  return eq;
}

StabilityVerdict classify_stability(const OdeSystem& sys, const Vec& x0,
                                    const StabilityControls& controls) {
  check_positive(sys, x0);
  StabilityVerdict verdict;
  auto eq = find_equilibrium(sys, x0, controls.equilibrium);
  if (!eq) return verdict;
  verdict.equilibrium = eq;

  Eigen::MatrixXd q = kinetic_frame(sys, x0);
  std::size_t m = sys.species_count();
  if (q.cols() == 0) {
    verdict.classification = StabilityClass::LocallyStableInClass;
    return verdict;
  }

  // Uniqueness probe: deterministic pseudo-random restarts within the class.
  std::mt19937_64 rng(controls.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double spread = inf_norm(x0) + inf_norm(*eq);
  for (int s = 0; s < controls.multistart_seeds; ++s) {
    Vec start = x0;
    bool pos = true;
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      double amp = unif(rng) * spread;
      for (std::size_t a = 0; a < m; ++a) start[a] += amp * q(a, c);
    }
    for (double v : start)
      if (!(v > 0)) pos = false;
    if (!pos) continue;
    auto other = newton_in_class(sys, start, q, controls.equilibrium);
    if (!other) continue;
    // Newton can slide toward a boundary equilibrium; only interior
    // equilibria count against uniqueness.
    bool interior = true;
    for (double v : *other)
      if (v < 1e-7 * (1.0 + inf_norm(x0))) interior = false;
    if (!interior) continue;
    ++verdict.multistart_hits;
    double dist = 0;
    for (std::size_t a = 0; a < m; ++a) dist = std::max(dist, std::abs((*other)[a] - (*eq)[a]));
    if (dist > 1e-6 * (1.0 + inf_norm(*eq))) verdict.uniqueness_refuted = true;
  }

  auto jac = jacobian(sys, *eq);
  Eigen::MatrixXd jm(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) jm(a, b) = jac[a][b];
  Eigen::MatrixXd jr = q.transpose() * jm * q;
  Eigen::EigenSolver<Eigen::MatrixXd> es(jr);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    verdict.eigen_real_parts.push_back(es.eigenvalues()(i).real());
  std::sort(verdict.eigen_real_parts.rbegin(), verdict.eigen_real_parts.rend());

  if (verdict.uniqueness_refuted) {
    verdict.classification = StabilityClass::Inconclusive;
  } else if (!verdict.eigen_real_parts.empty() &&
             verdict.eigen_real_parts.front() < -controls.tol_eig) {
    verdict.classification = StabilityClass::LocallyStableInClass;
  } else if (!verdict.eigen_real_parts.empty() &&
             verdict.eigen_real_parts.front() > controls.tol_eig) {
    verdict.classification = StabilityClass::Unstable;
  }
  return verdict;
}

}  // namespace crn
