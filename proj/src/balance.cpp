#include "crn/balance.hpp"

#include "crn/structure.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace crn {

namespace {

double monomial(const Complex& z, const Vec& x) {
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (long e = 0; e < z.coeffs[j]; ++e) p *= x[j];
  return p;
}

bool balanced_at(const Network& net, const Vec& k, const Vec& x, const BalanceControls& controls) {
  if (x.size() != net.species_count()) throw DynamicsError("state dimension mismatch");
  for (double v : x)
    if (!(v > 0)) throw DynamicsError("state must be strictly positive");
  for (std::size_t c = 0; c < net.complex_count(); ++c) {
    double inflow = 0.0, outflow = 0.0;
    for (std::size_t i = 0; i < net.reaction_count(); ++i) {
      if (net.product_index(i) == c) inflow += k[i] * monomial(net.reactions()[i].reactant, x);
      if (net.reactant_index(i) == c) outflow += k[i];
    }
    outflow *= monomial(net.distinct_complexes()[c], x);
    double scale = std::max({inflow, outflow, 1.0});
    if (std::abs(inflow - outflow) >= controls.tol_bal * scale) return false;
  }
  return true;
}

}  // namespace

bool is_complex_balanced_at(const OdeSystem& sys, const Vec& x, const BalanceControls& controls) {
  return balanced_at(sys.network(), sys.rates(), x, controls);
}

BalanceCertificate find_complex_balanced_equilibrium(const Network& net, const Vec& k,
                                                     const BalanceControls& controls) {
  BalanceCertificate cert;
  cert.weakly_reversible = is_weakly_reversible(net);
  if (!cert.weakly_reversible) return cert;

  std::size_t n = net.complex_count();
  std::size_t m = net.species_count();

  // Kirchhoff matrix of the weighted complex digraph (column sums zero).
  Eigen::MatrixXd kirchhoff = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < net.reaction_count(); ++i) {
    std::size_t from = net.reactant_index(i), to = net.product_index(i);
    kirchhoff(to, from) += k[i];
    kirchhoff(from, from) -= k[i];
  }

  auto classes = linkage_classes(net);
  cert.kernel.assign(n, 0.0);
  for (const auto& cls : classes) {
    if (cls.size() == 1) {
      cert.kernel[cls[0]] = 1.0;
      continue;
    }
    Eigen::MatrixXd sub(cls.size(), cls.size());
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = 0; b < cls.size(); ++b) sub(a, b) = kirchhoff(cls[a], cls[b]);
    // Matrix-tree: the kernel entry at node i is the principal minor with
    // row/column i deleted (a positive sum of converging spanning trees).
    for (std::size_t drop = 0; drop < cls.size(); ++drop) {
      Eigen::MatrixXd minor(cls.size() - 1, cls.size() - 1);
      for (std::size_t a = 0, ai = 0; a < cls.size(); ++a) {
        if (a == drop) continue;
        for (std::size_t b = 0, bi = 0; b < cls.size(); ++b) {
          if (b == drop) continue;
          minor(ai, bi) = sub(a, b);
          ++bi;
        }
        ++ai;
      }
      cert.kernel[cls[drop]] = std::abs(minor.determinant());
    }
    // Weak reversibility makes each class strongly connected, so every
    // entry must be strictly positive.
    double top = 0.0;
    for (std::size_t idx : cls) top = std::max(top, cert.kernel[idx]);
    for (std::size_t idx : cls)
      if (!(cert.kernel[idx] > 1e-14 * top)) return cert;
  }

  // Membership: does psi equal (x^{z_i})_i up to one factor per class?
  // Rows: z_i . mu - a_L = ln psi_i. Unknowns: mu (m) then a_L (one per class).
  std::size_t ell = classes.size();
  Eigen::MatrixXd a(n, m + ell);
  Eigen::VectorXd b(n);
  a.setZero();
  for (std::size_t lc = 0; lc < classes.size(); ++lc) {
    for (std::size_t idx : classes[lc]) {
      const Complex& z = net.distinct_complexes()[idx];
      for (std::size_t j = 0; j < m; ++j) a(idx, j) = static_cast<double>(z.coeffs[j]);
      a(idx, m + lc) = -1.0;
      b(idx) = std::log(cert.kernel[idx]);
    }
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
  cert.residual = (a * sol - b).lpNorm<Eigen::Infinity>();

  Vec mu(m);
  for (std::size_t j = 0; j < m; ++j) mu[j] = sol(j);
  cert.log_solution = mu;
  if (cert.residual < controls.residual_tol) {
    Vec xstar(m);
    for (std::size_t j = 0; j < m; ++j) xstar[j] = std::exp(mu[j]);
    if (balanced_at(net, k, xstar, controls)) {
      cert.balanced = true;
      cert.equilibrium = xstar;
    }
  }
  return cert;
}

BalanceCertificate find_complex_balanced_equilibrium(const OdeSystem& sys,
                                                     const BalanceControls& controls) {
  return find_complex_balanced_equilibrium(sys.network(), sys.rates(), controls);
}

bool is_complex_balanced_system(const OdeSystem& sys, const BalanceControls& controls) {
  return find_complex_balanced_equilibrium(sys, controls).balanced;
}

}  // namespace crn
