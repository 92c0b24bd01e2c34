#pragma once

#include "crn/balance.hpp"
#include "crn/conjugacy.hpp"
#include "crn/model.hpp"

#include <vector>

namespace crn {

struct SearchConfig {
  std::size_t max_complexes = 7;
  bool allow_phantoms = true;
  std::size_t max_phantoms = 2;           // phantom pool = product complexes of the input
  bool require_complex_balanced = false;
  bool identity_scaling = false;          // restrict to T = I realizations
  std::size_t max_candidates = 1000000;   // weakly reversible digraphs examined
  std::size_t max_results = 64;
  bool dedup = true;
  std::size_t sweep_grid = 33;            // grid points per free witness parameter
  BalanceControls balance;
};

struct SearchResult {
  Network target;            // instantiated with the witness rates k_tilde
  ConjugacyWitness witness;
  bool balanced = false;
  bool stability_implied = false;  // balanced targets transfer local stability
  std::size_t complex_set_size = 0;
  std::size_t edge_count = 0;
  std::size_t phantom_count = 0;
};

struct SearchOutcome {
  std::vector<SearchResult> results;  // sorted by (complex count, edge count, order found)
  bool truncated = false;             // a cap was exhausted; results are partial
  std::size_t candidates_checked = 0;
};

struct DigraphEdge {
  std::size_t from, to;
  bool operator==(const DigraphEdge& o) const { return from == o.from && to == o.to; }
};
using EdgeSet = std::vector<DigraphEdge>;

/// All nonempty directed edge sets (no self-loops) over the complex set in
/// which every edge lies on a directed cycle. Deterministic order: ascending
/// edge count, then ascending bitmask over the lexicographic edge list.
/// Stops after cap candidates. Throws SearchError above max_complexes.
std::vector<EdgeSet> enumerate_wr_digraphs(const std::vector<Complex>& complexes, std::size_t cap,
                                           std::size_t max_complexes = 7);

/// Enumerate weakly reversible candidate targets over the input's reactant
/// complexes (optionally augmented with phantom reactant complexes drawn from
/// its product complexes), keep those linearly conjugate to (original, k),
/// and optionally filter by complex balancing, sweeping any free witness
/// parameters over the solution cone.
SearchOutcome search_conjugate_targets(const Network& original, const RatVector& k,
                                       const SearchConfig& cfg = {});

class SearchError : public std::runtime_error {
public:
  explicit SearchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
