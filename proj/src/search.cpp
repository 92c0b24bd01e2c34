#include "crn/search.hpp"

#include "crn/ratlinalg.hpp"
#include "crn/structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>

namespace crn {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> edge_list(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) edges.emplace_back(i, j);
  return edges;
}

bool mask_is_weakly_reversible(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                               std::uint64_t mask, std::size_t n) {
  ComplexGraph g;
  g.node_count = n;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (mask & (std::uint64_t(1) << e))
      g.edges.push_back({edges[e].first, edges[e].second, Rational(1)});
  auto scc = strongly_connected_components(g);
  for (const auto& edge : g.edges)
    if (scc[edge.from] != scc[edge.to]) return false;
  return true;
}

/// Visit weakly reversible edge sets in canonical order; returns true when the
/// cap cut the stream short. fn returns false to stop early.
bool for_each_wr_digraph(std::size_t n, std::size_t cap,
                         const std::function<bool(const EdgeSet&)>& fn) {
  auto edges = edge_list(n);
  std::size_t num_edges = edges.size();
  if (num_edges >= 63) throw SearchError("edge universe too large");
  std::size_t emitted = 0;
  for (std::size_t count = 2; count <= num_edges; ++count) {
    std::uint64_t mask = (std::uint64_t(1) << count) - 1;
    std::uint64_t limit = std::uint64_t(1) << num_edges;
    while (mask < limit) {
      if (mask_is_weakly_reversible(edges, mask, n)) {
        if (emitted == cap) return true;
        ++emitted;
        EdgeSet es;
        for (std::size_t e = 0; e < num_edges; ++e)
          if (mask & (std::uint64_t(1) << e)) es.push_back({edges[e].first, edges[e].second});
        if (!fn(es)) return false;
      }
      // Gosper's hack: next mask with the same popcount.
      std::uint64_t c = mask & static_cast<std::uint64_t>(-static_cast<std::int64_t>(mask));
      std::uint64_t r = mask + c;
      if (r >= limit || r == 0) break;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  return false;
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

/// Necessary per-complex sign conditions for sum_i b_i dz_i = u_j L_j with
/// strictly positive b and u: cheap rejection before the exact LP.
bool sign_compatible(const std::vector<Complex>& complexes, const std::vector<RatVector>& outflow,
                     const std::vector<std::vector<long>>& delta_by_edge, const EdgeSet& es,
                     std::size_t m) {
  for (std::size_t s = 0; s < complexes.size(); ++s) {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < es.size(); ++e)
      if (es[e].from == s) out.push_back(e);
    for (std::size_t j = 0; j < m; ++j) {
      int sigma = outflow[s][j] > 0 ? 1 : (outflow[s][j] < 0 ? -1 : 0);
      bool pos = false, neg = false;
      for (std::size_t e : out) {
        if (delta_by_edge[e][j] > 0) pos = true;
        if (delta_by_edge[e][j] < 0) neg = true;
      }
      if (sigma > 0 && !pos) return false;
      if (sigma < 0 && !neg) return false;
      if (sigma == 0 && pos != neg) return false;
    }
  }
  return true;
}

struct SweepContext {
  const Network* target;
  const ConjugacySystem* sys;
  const BalanceControls* balance;
  Vec x0;                        // particular solution, doubles
  std::vector<Vec> dirs;         // free directions, doubles
  RatVector x0_exact;
  RatMatrix dirs_exact;
};

std::optional<Vec> sweep_point(const SweepContext& ctx, const std::vector<double>& theta) {
  Vec x = ctx.x0;
  for (std::size_t p = 0; p < ctx.dirs.size(); ++p)
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += theta[p] * ctx.dirs[p][i];
  for (double v : x)
    if (!(v > 1e-12)) return std::nullopt;
  return x;
}

Vec rates_at(const SweepContext& ctx, const Vec& x) {
  const ConjugacySystem& sys = *ctx.sys;
  std::size_t m = sys.u_col_of_species.size();
  Vec c(m, 1.0);
  for (std::size_t j = 0; j < m; ++j)
    if (sys.u_col_of_species[j] >= 0)
      c[j] = 1.0 / x[static_cast<std::size_t>(sys.u_col_of_species[j])];
  Vec kt(sys.num_b);
  for (std::size_t i = 0; i < sys.num_b; ++i) {
    double prod = x[i];
    const Complex& z = ctx.target->reactions()[i].reactant;
    for (std::size_t j = 0; j < m; ++j)
      for (long e = 0; e < z.coeffs[j]; ++e) prod *= c[j];
    kt[i] = prod;
  }
  return kt;
}

double sweep_objective(const SweepContext& ctx, const std::vector<double>& theta) {
  auto x = sweep_point(ctx, theta);
  if (!x) return std::numeric_limits<double>::infinity();
  auto cert = find_complex_balanced_equilibrium(*ctx.target, rates_at(ctx, *x), *ctx.balance);
  if (!cert.log_solution) return std::numeric_limits<double>::infinity();
  return cert.residual;
}

/// Golden-section minimization along coordinate p within [lo, hi].
void golden_refine(const SweepContext& ctx, std::vector<double>& theta, std::size_t p, double lo,
                   double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  auto eval = [&](double t) {
    std::vector<double> th = theta;
    th[p] = t;
    return sweep_objective(ctx, th);
  };
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(x2);
    }
  }
  theta[p] = f1 < f2 ? x1 : x2;
}

/// Range of theta_p keeping x0 + theta_p * dir strictly positive (other
/// coordinates at zero); conservative box for the multi-parameter case.
std::pair<double, double> direction_bounds(const Vec& x0, const Vec& dir) {
  double lo = -1e6, hi = 1e6;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (dir[i] > 1e-14) lo = std::max(lo, -x0[i] / dir[i]);
    if (dir[i] < -1e-14) hi = std::min(hi, -x0[i] / dir[i]);
  }
  return {lo, hi};
}

/// Sweep the free directions of the witness cone for a complex-balanced
/// instantiation. Returns the exact solution vector on success.
std::optional<RatVector> sweep_for_balance(const SweepContext& ctx, std::size_t grid) {
  std::size_t p = ctx.dirs.size();
  if (p == 0) return std::nullopt;

  std::vector<std::pair<double, double>> box;
  for (const Vec& d : ctx.dirs) box.push_back(direction_bounds(ctx.x0, d));

  auto grid_value = [&](std::size_t axis, std::size_t t, std::size_t points) {
    auto [lo, hi] = box[axis];
    return lo + (static_cast<double>(t) + 1.0) * (hi - lo) / (static_cast<double>(points) + 1.0);
  };

  std::vector<double> best(p, 0.0);
  double best_f = sweep_objective(ctx, best);

  if (p == 1) {
    for (std::size_t t = 0; t < grid; ++t) {
      std::vector<double> th{grid_value(0, t, grid)};
      double f = sweep_objective(ctx, th);
      if (f < best_f) {
        best_f = f;
        best = th;
      }
    }
  } else if (p == 2) {
    for (std::size_t t1 = 0; t1 < grid; ++t1)
      for (std::size_t t2 = 0; t2 < grid; ++t2) {
        std::vector<double> th{grid_value(0, t1, grid), grid_value(1, t2, grid)};
        double f = sweep_objective(ctx, th);
        if (f < best_f) {
          best_f = f;
          best = th;
        }
      }
  } else {
    std::mt19937_64 rng(42);
    for (std::size_t trial = 0; trial < 2000; ++trial) {
      std::vector<double> th(p);
      for (std::size_t q = 0; q < p; ++q) {
        std::uniform_real_distribution<double> dist(box[q].first, box[q].second);
        th[q] = dist(rng);
      }
      double f = sweep_objective(ctx, th);
      if (f < best_f) {
        best_f = f;
        best = th;
      }
    }
  }

  // Coordinate-wise golden-section refinement around the incumbent.
  for (int round = 0; round < (p == 1 ? 1 : 8); ++round) {
    for (std::size_t q = 0; q < p; ++q) {
      auto [lo, hi] = box[q];
      double span = (hi - lo) / (static_cast<double>(grid) + 1.0);
      if (round > 0) span /= std::pow(4.0, round);
      golden_refine(ctx, best, q, std::max(lo, best[q] - span), std::min(hi, best[q] + span));
    }
  }
  best_f = sweep_objective(ctx, best);
  if (!(best_f < ctx.balance->residual_tol)) return std::nullopt;

  // Snap to dyadic rationals so the witness stays exact.
  RatVector x = ctx.x0_exact;
  const long long den = 1LL << 48;
  for (std::size_t q = 0; q < p; ++q) {
    Rational t(static_cast<long long>(std::llround(best[q] * static_cast<double>(den))), den);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * ctx.dirs_exact[q][i];
  }
  for (const Rational& v : x)
    if (v <= 0) return std::nullopt;
  if (!ctx.sys->identity_scaling) {
    Rational umax(0);
    for (long col : ctx.sys->u_col_of_species)
      if (col >= 0 && x[static_cast<std::size_t>(col)] > umax)
        umax = x[static_cast<std::size_t>(col)];
    if (umax > 0)
      for (Rational& v : x) v /= umax;
  }
  return x;
}

std::string candidate_key(const std::vector<Complex>& complexes, const EdgeSet& es) {
  std::string key;
  for (const Complex& c : complexes) {
    for (long v : c.coeffs) key += std::to_string(v) + ".";
    key += ";";
  }
  key += "|";
  for (const auto& e : es) key += std::to_string(e.from) + ">" + std::to_string(e.to) + ",";
  return key;
}

}  // namespace

std::vector<EdgeSet> enumerate_wr_digraphs(const std::vector<Complex>& complexes, std::size_t cap,
                                           std::size_t max_complexes) {
  if (complexes.size() < 2) throw SearchError("need at least 2 complexes");
  if (complexes.size() > max_complexes) throw SearchError("complex count exceeds max_complexes");
  std::vector<EdgeSet> out;
  for_each_wr_digraph(complexes.size(), cap, [&](const EdgeSet& es) {
    out.push_back(es);
    return true;
  });
  return out;
}

SearchOutcome search_conjugate_targets(const Network& original, const RatVector& k,
                                       const SearchConfig& cfg) {
  if (k.size() != original.reaction_count())
    throw SearchError("rate vector length does not match reaction count");

  // Base complexes: the input's reactant complexes, first-appearance order.
  std::vector<Complex> base;
  for (std::size_t ci : original.reactant_complex_indices())
    base.push_back(original.distinct_complexes()[ci]);
  if (base.size() > cfg.max_complexes) throw SearchError("complex count exceeds max_complexes");

  // Phantom pool: product complexes that are not reactants of the input.
  std::vector<Complex> pool;
  if (cfg.allow_phantoms) {
    for (std::size_t i = 0; i < original.reaction_count(); ++i) {
      const Complex& c = original.reactions()[i].product;
      bool seen = std::find(base.begin(), base.end(), c) != base.end() ||
                  std::find(pool.begin(), pool.end(), c) != pool.end();
      if (!seen) pool.push_back(c);
    }
  }

  // Phantom index subsets ordered by size then lexicographically.
  std::vector<std::vector<std::size_t>> phantom_sets{{}};
  std::size_t cap_phantoms = std::min(cfg.max_phantoms, pool.size());
  for (std::size_t size = 1; size <= cap_phantoms; ++size) {
    std::vector<std::size_t> pick(size);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
      if (pos == size) {
        phantom_sets.push_back(pick);
        return;
      }
      for (std::size_t i = start; i < pool.size(); ++i) {
        pick[pos] = i;
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }

  SearchOutcome outcome;
  std::set<std::string> seen_keys;
  ConjugacyOptions opts;
  opts.identity_scaling = cfg.identity_scaling;

  for (const auto& phantoms : phantom_sets) {
    std::vector<Complex> complexes = base;
    for (std::size_t i : phantoms) complexes.push_back(pool[i]);
    if (complexes.size() < 2 || complexes.size() > cfg.max_complexes) continue;

    std::size_t m = original.species_count();
    std::vector<RatVector> outflow;
    for (const Complex& c : complexes) outflow.push_back(aggregated_outflow(original, k, c));

    bool stop = false;
    bool truncated = for_each_wr_digraph(
        complexes.size(), cfg.max_candidates - outcome.candidates_checked,
        [&](const EdgeSet& es) {
          ++outcome.candidates_checked;

          // Phantoms must participate; complexes with nonzero aggregated
          // outflow must keep an out-edge to have anything to match.
          std::vector<bool> has_out(complexes.size(), false);
          for (const auto& e : es) has_out[e.from] = true;
          for (std::size_t s = base.size(); s < complexes.size(); ++s)
            if (!has_out[s]) return true;
          for (std::size_t s = 0; s < complexes.size(); ++s) {
            bool nonzero = std::any_of(outflow[s].begin(), outflow[s].end(),
                                       [](const Rational& q) { return q != 0; });
            if (nonzero && !has_out[s]) return true;
          }

          std::vector<std::vector<long>> delta(es.size(), std::vector<long>(m, 0));
          for (std::size_t e = 0; e < es.size(); ++e)
            for (std::size_t j = 0; j < m; ++j)
              delta[e][j] =
                  complexes[es[e].to].coeffs[j] - complexes[es[e].from].coeffs[j];
          if (!sign_compatible(complexes, outflow, delta, es, m)) return true;

          if (cfg.dedup && !seen_keys.insert(candidate_key(complexes, es)).second) return true;

          std::vector<Reaction> reactions;
          for (const auto& e : es)
            reactions.push_back({complexes[e.from], complexes[e.to], Rational(1)});
          Network target(original.species(), std::move(reactions));

          ConjugacySystem sys = build_conjugacy_system(original, k, target, opts);
          auto x = solve_system_strict(sys);
          if (!x) return true;

          ConjugacyWitness witness = witness_from_solution(sys, target, *x);
          Vec kt_d(witness.k_tilde.size());
          for (std::size_t i = 0; i < kt_d.size(); ++i) kt_d[i] = to_double(witness.k_tilde[i]);
          bool balanced =
              find_complex_balanced_equilibrium(target, kt_d, cfg.balance).balanced;

          if (!balanced && cfg.require_complex_balanced) {
            // Complex balancing may hold only on a subvariety of the witness
            // cone: sweep its free directions.
            RatMatrix ns = system_nullspace(sys);
            SweepContext ctx;
            ctx.target = &target;
            ctx.sys = &sys;
            ctx.balance = &cfg.balance;
            ctx.x0_exact = *x;
            ctx.x0.resize(x->size());
            for (std::size_t i = 0; i < x->size(); ++i) ctx.x0[i] = to_double((*x)[i]);
            std::vector<Vec> dirs;
            RatMatrix dirs_exact;
            std::size_t drop = ns.size();
            if (!sys.identity_scaling && !ns.empty()) {
              // The homogeneous system is scale-invariant: drop the direction
              // most aligned with the solution itself.
              Eigen::MatrixXd v(x->size(), ns.size());
              Eigen::VectorXd rhs(x->size());
              for (std::size_t i = 0; i < x->size(); ++i) {
                rhs(i) = ctx.x0[i];
                for (std::size_t q = 0; q < ns.size(); ++q) v(i, q) = to_double(ns[q][i]);
              }
              Eigen::VectorXd theta = v.colPivHouseholderQr().solve(rhs);
              double top = -1.0;
              for (std::size_t q = 0; q < ns.size(); ++q)
                if (std::abs(theta(q)) > top) {
                  top = std::abs(theta(q));
                  drop = q;
                }
            }
            for (std::size_t q = 0; q < ns.size(); ++q) {
              if (q == drop) continue;
              dirs_exact.push_back(ns[q]);
              Vec d(ns[q].size());
              for (std::size_t i = 0; i < d.size(); ++i) d[i] = to_double(ns[q][i]);
              dirs.push_back(std::move(d));
            }
            ctx.dirs = std::move(dirs);
            ctx.dirs_exact = std::move(dirs_exact);
            auto swept = sweep_for_balance(ctx, cfg.sweep_grid);
            if (swept) {
              witness = witness_from_solution(sys, target, *swept);
              for (std::size_t i = 0; i < kt_d.size(); ++i)
                kt_d[i] = to_double(witness.k_tilde[i]);
              balanced = find_complex_balanced_equilibrium(target, kt_d, cfg.balance).balanced;
            }
          }

          if (cfg.require_complex_balanced && !balanced) return true;

          std::vector<Reaction> final_reactions;
          for (std::size_t i = 0; i < target.reaction_count(); ++i)
            final_reactions.push_back({target.reactions()[i].reactant,
                                       target.reactions()[i].product, witness.k_tilde[i]});
          SearchResult result{Network(original.species(), std::move(final_reactions)),
                              std::move(witness),
                              balanced,
                              balanced,
                              complexes.size(),
                              es.size(),
                              phantoms.size()};
          outcome.results.push_back(std::move(result));
          if (outcome.results.size() >= cfg.max_results) {
            outcome.truncated = true;
            stop = true;
            return false;
          }
          return true;
        });
    if (truncated) outcome.truncated = true;
    if (stop || outcome.candidates_checked >= cfg.max_candidates) break;
  }

  std::stable_sort(outcome.results.begin(), outcome.results.end(),
                   [](const SearchResult& a, const SearchResult& b) {
                     if (a.complex_set_size != b.complex_set_size)
                       return a.complex_set_size < b.complex_set_size;
                     return a.edge_count < b.edge_count;
                   });
  return outcome;
}

}  // namespace crn
