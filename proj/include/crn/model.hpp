#pragma once

#include "crn/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crn {

/// Ordered list of distinct species identifiers.
struct SpeciesTable {
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
};

/// A formal nonnegative-integer combination of species, e.g. A1 + 2 A2.
struct Complex {
  std::vector<long> coeffs;

  bool operator==(const Complex& other) const { return coeffs == other.coeffs; }
  bool is_zero() const;
  long total() const;
};

/// reactant -> product with a positive exact-rational rate constant.
struct Reaction {
  Complex reactant;
  Complex product;
  Rational rate;

  bool operator==(const Reaction& other) const {
    return reactant == other.reactant && product == other.product && rate == other.rate;
  }
};

/// A mass-action reaction network. The distinct-complex list and the
/// reactant-complex subset are derived at construction and kept in
/// first-appearance order. Immutable after construction.
class Network {
public:
  Network(SpeciesTable species, std::vector<Reaction> reactions);

  const SpeciesTable& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const std::vector<Complex>& distinct_complexes() const { return distinct_; }
  const std::vector<std::size_t>& reactant_complex_indices() const { return reactant_indices_; }

  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }
  std::size_t complex_count() const { return distinct_.size(); }

  /// Index of the reaction's reactant/product within distinct_complexes().
  std::size_t reactant_index(std::size_t reaction) const { return reactant_of_[reaction]; }
  std::size_t product_index(std::size_t reaction) const { return product_of_[reaction]; }

  /// Reaction vector z' - z as rationals.
  RatVector reaction_vector(std::size_t reaction) const;

  bool operator==(const Network& other) const;

private:
  SpeciesTable species_;
  std::vector<Reaction> reactions_;
  std::vector<Complex> distinct_;
  std::vector<std::size_t> reactant_indices_;
  std::vector<std::size_t> reactant_of_;
  std::vector<std::size_t> product_of_;
};

/// Position of c within net.distinct_complexes(), if present.
/// Throws ModelError on a length mismatch.
std::optional<std::size_t> canonical_complex_index(const Network& net, const Complex& c);

/// Parse the network text format. See README for the grammar; briefly:
///   species: A1 A2
///   A1 + 2 A2 -> 3 A1 ; k = 1/2
///   A1 <-> 2 A2 ; kf = 1 ; kr = 0.25
/// '#' starts a comment, '0' denotes the zero complex.
Network parse_network(const std::string& text);

/// Inverse of parse_network up to rational normalization.
std::string serialize_network(const Network& net);

std::string format_complex(const Network& net, const Complex& c);

class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
