// Command-line front end: analyze, conjugate, simulate, verify.
#include "CLI11.hpp"
#include "json.hpp"

#include "crn/balance.hpp"
#include "crn/conjugacy.hpp"
#include "crn/dynamics.hpp"
#include "crn/model.hpp"
#include "crn/search.hpp"
#include "crn/structure.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using json = nlohmann::json;
using namespace crn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

const char* kSchema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "crn-tool report",
  "version": 1,
  "type": "object",
  "properties": {
    "schema_version": {"const": 1},
    "structure": {
      "type": "object",
      "properties": {
        "weakly_reversible": {"type": "boolean"},
        "linkage_classes": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "complexes": {"type": "integer"},
        "reactions": {"type": "integer"},
        "species": {"type": "integer"},
        "s": {"type": "integer"},
        "s_star": {"type": "integer"}
      }
    },
    "dynamics": {
      "type": "object",
      "properties": {
        "equilibrium": {"type": ["array", "null"], "items": {"type": "number"}},
        "classification": {"enum": ["locally_stable_in_class", "unstable", "inconclusive"]},
        "eigen_real_parts": {"type": "array", "items": {"type": "number"}}
      }
    },
    "balance": {
      "type": "object",
      "properties": {
        "complex_balanced": {"type": "boolean"},
        "equilibrium": {"type": ["array", "null"], "items": {"type": "number"}},
        "residual": {"type": "number"}
      }
    },
    "conjugacy": {
      "type": "object",
      "properties": {
        "feasible": {"type": "boolean"},
        "witness": {"type": ["object", "null"]},
        "results": {"type": "array"}
      }
    }
  }
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("file not found: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RatVector parse_rate_list(const std::string& text) {
  RatVector out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(parse_rational(item));
  return out;
}

Vec parse_double_list(const std::string& text) {
  Vec out;
  for (const Rational& q : parse_rate_list(text)) out.push_back(to_double(q));
  return out;
}

// Network from file with optional rate override.
std::pair<Network, RatVector> load_network(const std::string& path, const std::string& k_flag) {
  Network net = parse_network(read_file(path));
  RatVector k;
  for (const Reaction& rx : net.reactions()) k.push_back(rx.rate);
  if (!k_flag.empty()) {
    k = parse_rate_list(k_flag);
    if (k.size() != net.reaction_count())
      throw std::runtime_error("--k needs " + std::to_string(net.reaction_count()) + " values");
    std::vector<Reaction> rx = net.reactions();
    for (std::size_t i = 0; i < rx.size(); ++i) rx[i].rate = k[i];
    net = Network(net.species(), std::move(rx));
  }
  return {std::move(net), std::move(k)};
}

json rational_vector_json(const RatVector& v) {
  json arr = json::array();
  for (const Rational& q : v) arr.push_back(format_rational(q));
  return arr;
}

json witness_json(const ConjugacyWitness& w) {
  return json{{"c", rational_vector_json(w.c)},
              {"b", rational_vector_json(w.b)},
              {"k_tilde", rational_vector_json(w.k_tilde)},
              {"permutation", w.permutation},
              {"solution_cone_dim", w.solution_cone_dim}};
}

const char* classification_name(StabilityClass c) {
  switch (c) {
    case StabilityClass::LocallyStableInClass: return "locally_stable_in_class";
    case StabilityClass::Unstable: return "unstable";
    default: return "inconclusive";
  }
}

void print_witness_text(const ConjugacyWitness& w) {
  std::cout << "feasible\n";
  std::cout << "c:";
  for (const Rational& q : w.c) std::cout << " " << format_rational(q);
  std::cout << "\nb:";
  for (const Rational& q : w.b) std::cout << " " << format_rational(q);
  std::cout << "\nk_tilde:";
  for (const Rational& q : w.k_tilde) std::cout << " " << format_rational(q);
  std::cout << "\nsolution_cone_dim: " << w.solution_cone_dim << "\n";
  bool nontrivial = false;
  for (std::size_t j = 0; j < w.permutation.size(); ++j)
    if (w.permutation[j] != j) nontrivial = true;
  if (nontrivial) {
    std::cout << "permutation:";
    for (std::size_t p : w.permutation) std::cout << " " << p;
    std::cout << "\n";
  }
}

struct ToolOptions {
  bool json_output = false;
  unsigned long long seed = 42;
  double tol_eq = 1e-10;
  double tol_eig = 1e-8;
  double tol_bal = 1e-8;
  double rel_tol = 1e-9;
};

int cmd_analyze(const std::string& file, const std::string& k_flag, const std::string& x0_flag,
                const ToolOptions& opts) {
  auto [net, k] = load_network(file, k_flag);
  OdeSystem sys(net, k);

  auto subspaces = kinetic_subspace(net, k);
  StabilityControls sc;
  sc.seed = opts.seed;
  sc.tol_eig = opts.tol_eig;
  sc.equilibrium.tol_eq = opts.tol_eq;
  sc.equilibrium.integration.rel_tol = opts.rel_tol;
  Vec x0(net.species_count(), 1.0);
  if (!x0_flag.empty()) x0 = parse_double_list(x0_flag);
  auto verdict = classify_stability(sys, x0, sc);

  BalanceControls bc;
  bc.tol_bal = opts.tol_bal;
  auto cert = find_complex_balanced_equilibrium(sys, bc);

  if (opts.json_output) {
    json report;
    report["schema_version"] = 1;
    report["structure"] = {{"weakly_reversible", is_weakly_reversible(net)},
                           {"linkage_classes", linkage_classes(net)},
                           {"complexes", net.complex_count()},
                           {"reactions", net.reaction_count()},
                           {"species", net.species_count()},
                           {"s", subspaces.s},
                           {"s_star", subspaces.s_star}};
    report["dynamics"] = {
        {"equilibrium", verdict.equilibrium ? json(*verdict.equilibrium) : json(nullptr)},
        {"classification", classification_name(verdict.classification)},
        {"eigen_real_parts", verdict.eigen_real_parts}};
    report["balance"] = {
        {"complex_balanced", cert.balanced},
        {"equilibrium", cert.equilibrium ? json(*cert.equilibrium) : json(nullptr)},
        {"residual", cert.residual}};
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "weakly_reversible: " << (is_weakly_reversible(net) ? "yes" : "no") << "\n"
              << "species: " << net.species_count() << "  reactions: " << net.reaction_count()
              << "  complexes: " << net.complex_count()
              << "  linkage_classes: " << linkage_classes(net).size() << "\n"
              << "s: " << subspaces.s << "  s_star: " << subspaces.s_star << "\n";
    std::cout << "stability: " << classification_name(verdict.classification) << "\n";
    if (verdict.equilibrium) {
      std::cout << "equilibrium:";
      for (double v : *verdict.equilibrium) std::cout << " " << v;
      std::cout << "\n";
    }
    std::cout << "complex_balanced: " << (cert.balanced ? "yes" : "no") << "\n";
    if (cert.equilibrium) {
      std::cout << "balance_equilibrium:";
      for (double v : *cert.equilibrium) std::cout << " " << v;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_conjugate(const std::string& file, const std::string& target_file, bool do_search,
                  const std::string& k_flag, bool allow_phantoms, bool require_cb,
                  bool allow_permutation, std::size_t max_complexes, const ToolOptions& opts) {
  auto [net, k] = load_network(file, k_flag);

  if (do_search) {
    SearchConfig cfg;
    cfg.allow_phantoms = allow_phantoms;
    cfg.require_complex_balanced = require_cb;
    cfg.max_complexes = max_complexes;
    auto outcome = search_conjugate_targets(net, k, cfg);
    if (opts.json_output) {
      json out;
      out["schema_version"] = 1;
      out["truncated"] = outcome.truncated;
      out["candidates_checked"] = outcome.candidates_checked;
      out["results"] = json::array();
      for (const auto& r : outcome.results)
        out["results"].push_back({{"target", serialize_network(r.target)},
                                  {"witness", witness_json(r.witness)},
                                  {"complex_balanced", r.balanced},
                                  {"stability_implied", r.stability_implied},
                                  {"complex_set_size", r.complex_set_size},
                                  {"edge_count", r.edge_count},
                                  {"phantom_count", r.phantom_count}});
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "results: " << outcome.results.size()
                << "  candidates_checked: " << outcome.candidates_checked
                << (outcome.truncated ? "  (truncated)" : "") << "\n";
      for (const auto& r : outcome.results) {
        std::cout << "---\n" << serialize_network(r.target);
        std::cout << "complex_balanced: " << (r.balanced ? "yes" : "no") << "\n";
      }
    }
    return outcome.results.empty() ? kExitNegative : kExitOk;
  }

  Network target = parse_network(read_file(target_file));
  std::optional<ConjugacyWitness> w =
      allow_permutation ? solve_conjugacy_permuted(net, k, target) : solve_conjugacy(net, k, target);
  if (opts.json_output) {
    json out;
    out["schema_version"] = 1;
    out["feasible"] = w.has_value();
    out["witness"] = w ? witness_json(*w) : json(nullptr);
    std::cout << out.dump(2) << "\n";
  } else if (w) {
    print_witness_text(*w);
  } else {
    std::cout << "infeasible\n";
  }
  return w ? kExitOk : kExitNegative;
}

int cmd_simulate(const std::string& file, const std::string& k_flag, const std::string& x0_flag,
                 double t_end, const std::string& out_path, const std::string& verify_against,
                 const ToolOptions& opts) {
  auto [net, k] = load_network(file, k_flag);
  OdeSystem sys(net, k);
  Vec x0 = parse_double_list(x0_flag);
  for (double v : x0)
    if (!(v > 0)) throw std::runtime_error("--x0 entries must be strictly positive");

  IntegrationControls ic;
  ic.rel_tol = opts.rel_tol;
  Trajectory tr = integrate(sys, x0, t_end, ic);
  std::string csv = trajectory_csv(sys, tr);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << csv;
  } else {
    std::cout << csv;
  }
  if (tr.status != TrajectoryStatus::Completed) {
    std::cerr << "integration stopped early: "
              << (tr.status == TrajectoryStatus::PositivityLoss ? "positivity loss"
                  : tr.status == TrajectoryStatus::Diverged     ? "divergence"
                                                                : "step underflow")
              << " (partial output written)\n";
    return kExitNegative;
  }

  if (!verify_against.empty()) {
    Network target = parse_network(read_file(verify_against));
    auto w = solve_conjugacy(net, k, target);
    if (!w) {
      std::cerr << "no conjugacy witness against " << verify_against << "\n";
      return kExitNegative;
    }
    OdeSystem targ(target, w->k_tilde);
    auto ver = verify_conjugacy_numerically(sys, targ, *w, x0, t_end, 1e-6);
    std::cerr << "conjugacy check: " << (ver.passed ? "passed" : "failed")
              << " (max deviation " << ver.max_deviation << ")\n";
    if (!ver.passed) return kExitNegative;
  }
  return kExitOk;
}

int cmd_verify(const std::string& file, const std::string& target_file, const std::string& k_flag,
               const std::string& x0_flag, double t_end, double tol, const ToolOptions& opts) {
  auto [net, k] = load_network(file, k_flag);
  Network target = parse_network(read_file(target_file));
  auto w = solve_conjugacy(net, k, target);
  if (!w) {
    std::cout << (opts.json_output ? "{\"feasible\": false}\n" : "infeasible\n");
    return kExitNegative;
  }
  OdeSystem orig(net, k);
  OdeSystem targ(target, w->k_tilde);
  Vec x0(net.species_count(), 1.0);
  if (!x0_flag.empty()) x0 = parse_double_list(x0_flag);
  auto ver = verify_conjugacy_numerically(orig, targ, *w, x0, t_end, tol);
  if (opts.json_output) {
    json out{{"schema_version", 1},
             {"feasible", true},
             {"passed", ver.passed},
             {"max_deviation", ver.max_deviation},
             {"witness", witness_json(*w)}};
    std::cout << out.dump(2) << "\n";
  } else {
    print_witness_text(*w);
    std::cout << "trajectory_check: " << (ver.passed ? "passed" : "failed") << " (max deviation "
              << ver.max_deviation << ")\n";
  }
  return ver.passed ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass-action reaction network analysis"};
  app.require_subcommand(0, 1);

  ToolOptions opts;
  bool show_schema = false;
  app.add_flag("--json", opts.json_output, "Emit JSON reports");
  app.add_flag("--schema", show_schema, "Print the report JSON schema and exit");
  app.add_option("--seed", opts.seed, "Seed for randomized probes");
  app.add_option("--tol-eq", opts.tol_eq, "Equilibrium residual tolerance");
  app.add_option("--tol-eig", opts.tol_eig, "Eigenvalue classification tolerance");
  app.add_option("--tol-bal", opts.tol_bal, "Complex-balance tolerance");
  app.add_option("--rel-tol", opts.rel_tol, "Integrator relative tolerance");

  std::string file, target_file, k_flag, x0_flag, out_path, verify_against;
  bool do_search = false, allow_phantoms = false, require_cb = false, allow_permutation = false;
  std::size_t max_complexes = 7;
  double t_end = 10.0, tol = 1e-6;

  auto* analyze = app.add_subcommand("analyze", "Structure, dynamics and balance report");
  analyze->add_option("file", file, "Network file")->required();
  analyze->add_option("--k", k_flag, "Override rate constants (comma separated)");
  analyze->add_option("--x0", x0_flag, "Initial state for the dynamics section");

  auto* conjugate = app.add_subcommand("conjugate", "Linear conjugacy to a target or search");
  conjugate->add_option("file", file, "Network file")->required();
  auto* topt = conjugate->add_option("--target", target_file, "Target network file");
  auto* sopt = conjugate->add_flag("--search", do_search, "Search for weakly reversible targets");
  topt->excludes(sopt);
  conjugate->add_option("--k", k_flag, "Override rate constants");
  conjugate->add_flag("--allow-phantoms", allow_phantoms, "Allow phantom reactant complexes");
  conjugate->add_flag("--require-cb", require_cb, "Keep only complex-balanced targets");
  conjugate->add_flag("--allow-permutation", allow_permutation, "Try species permutations");
  conjugate->add_option("--max-complexes", max_complexes, "Candidate complex cap");

  auto* simulate = app.add_subcommand("simulate", "Integrate and emit CSV");
  simulate->add_option("file", file, "Network file")->required();
  simulate->add_option("--x0", x0_flag, "Initial state (comma separated)")->required();
  simulate->add_option("--t-end", t_end, "Integration end time");
  simulate->add_option("--k", k_flag, "Override rate constants");
  simulate->add_option("--out", out_path, "CSV output file (default stdout)");
  simulate->add_option("--verify-against", verify_against,
                       "Also check trajectory conjugacy against this target");

  auto* verify = app.add_subcommand("verify", "Witness plus trajectory conjugacy check");
  verify->add_option("file", file, "Network file")->required();
  verify->add_option("target", target_file, "Target network file")->required();
  verify->add_option("--k", k_flag, "Override rate constants");
  verify->add_option("--x0", x0_flag, "Initial state");
  verify->add_option("--t-end", t_end, "Comparison horizon");
  verify->add_option("--tol", tol, "Sup-norm tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (show_schema) {
      std::cout << kSchema << "\n";
      return kExitOk;
    }
    if (analyze->parsed()) return cmd_analyze(file, k_flag, x0_flag, opts);
    if (conjugate->parsed()) {
      if (!do_search && target_file.empty())
        throw std::runtime_error("conjugate needs --target or --search");
      return cmd_conjugate(file, target_file, do_search, k_flag, allow_phantoms, require_cb,
                           allow_permutation, max_complexes, opts);
    }
    if (simulate->parsed())
      return cmd_simulate(file, k_flag, x0_flag, t_end, out_path, verify_against, opts);
    if (verify->parsed()) return cmd_verify(file, target_file, k_flag, x0_flag, t_end, tol, opts);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
