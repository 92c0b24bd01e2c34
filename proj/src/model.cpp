#include "crn/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace crn {

std::optional<std::size_t> SpeciesTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

bool Complex::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](long c) { return c == 0; });
}

long Complex::total() const {
  long t = 0;
  for (long c : coeffs) t += c;
  return t;
}

Network::Network(SpeciesTable species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  if (species_.size() == 0) throw ModelError("network needs at least one species");
  if (reactions_.empty()) throw ModelError("network needs at least one reaction");
  for (std::size_t i = 0; i < species_.names.size(); ++i) {
    if (species_.names[i].empty()) throw ModelError("empty species name");
    for (std::size_t j = i + 1; j < species_.names.size(); ++j)
      if (species_.names[i] == species_.names[j])
        throw ModelError("duplicate species name '" + species_.names[i] + "'");
  }

  auto intern = [this](const Complex& c) -> std::size_t {
    if (c.coeffs.size() != species_.size())
      throw ModelError("complex length does not match species count");
    for (long v : c.coeffs)
      if (v < 0) throw ModelError("negative stoichiometric coefficient");
    for (std::size_t i = 0; i < distinct_.size(); ++i)
      if (distinct_[i] == c) return i;
    distinct_.push_back(c);
    return distinct_.size() - 1;
  };

  for (const Reaction& rx : reactions_) {
    if (rx.rate <= 0) throw ModelError("rate constant must be positive");
    if (rx.reactant == rx.product) throw ModelError("reactant equals product");
    std::size_t ri = intern(rx.reactant);
    std::size_t pi = intern(rx.product);
    reactant_of_.push_back(ri);
    product_of_.push_back(pi);
    if (std::find(reactant_indices_.begin(), reactant_indices_.end(), ri) ==
        reactant_indices_.end())
      reactant_indices_.push_back(ri);
  }
}

RatVector Network::reaction_vector(std::size_t reaction) const {
  const Reaction& rx = reactions_.at(reaction);
  RatVector v(species_.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = Rational(rx.product.coeffs[j] - rx.reactant.coeffs[j]);
  return v;
}

bool Network::operator==(const Network& other) const {
  return species_.names == other.species_.names && reactions_ == other.reactions_;
}

std::optional<std::size_t> canonical_complex_index(const Network& net, const Complex& c) {
  if (c.coeffs.size() != net.species_count())
    throw ModelError("complex length does not match species count");
  for (std::size_t i = 0; i < net.distinct_complexes().size(); ++i)
    if (net.distinct_complexes()[i] == c) return i;
  return std::nullopt;
}

namespace {

struct Parser {
  std::vector<std::string> species_order;
  bool species_declared = false;
  struct RawTerm {
    long coeff;
    std::string name;
  };
  struct RawComplex {
    std::vector<RawTerm> terms;  // empty means the zero complex
  };
  struct RawReaction {
    RawComplex reactant, product;
    Rational rate;
    int line;
  };
  std::vector<RawReaction> raw;

  [[noreturn]] static void fail(int line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    throw ParseError(os.str());
  }

  void note_species(const std::string& name) {
    if (std::find(species_order.begin(), species_order.end(), name) == species_order.end()) {
      if (species_declared)
        throw ParseError("unknown species '" + name + "' (not in species header)");
      species_order.push_back(name);
    }
  }

  static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  RawComplex parse_complex(const std::string& text, int line) {
    std::string t = trim(text);
    if (t.empty()) fail(line, "empty complex");
    if (t == "0") return RawComplex{};
    RawComplex out;
    std::size_t pos = 0;
    while (pos <= t.size()) {
      std::size_t plus = t.find('+', pos);
      std::string term = trim(plus == std::string::npos ? t.substr(pos) : t.substr(pos, plus - pos));
      if (term.empty()) fail(line, "empty term in complex '" + t + "'");
      long coeff = 1;
      std::size_t i = 0;
      if (std::isdigit(static_cast<unsigned char>(term[0]))) {
        std::size_t end = 0;
        while (end < term.size() && std::isdigit(static_cast<unsigned char>(term[end]))) ++end;
        coeff = std::stol(term.substr(0, end));
        i = end;
        while (i < term.size() && std::isspace(static_cast<unsigned char>(term[i]))) ++i;
        if (i == term.size()) fail(line, "coefficient without species in '" + term + "'");
      }
      std::string name = trim(term.substr(i));
      if (name.empty() || name.find(' ') != std::string::npos)
        fail(line, "malformed term '" + term + "'");
      note_species(name);
      out.terms.push_back({coeff, name});
      if (plus == std::string::npos) break;
      pos = plus + 1;
    }
    return out;
  }

  Rational parse_rate_clause(const std::string& clause, const std::string& key, int line) {
    std::size_t eq = clause.find('=');
    if (eq == std::string::npos) fail(line, "expected '" + key + " = <value>'");
    std::string lhs = trim(clause.substr(0, eq));
    std::string rhs = trim(clause.substr(eq + 1));
    if (lhs != key) fail(line, "expected rate key '" + key + "', got '" + lhs + "'");
    Rational q;
    try {
      q = parse_rational(rhs);
    } catch (const ParseError& e) {
      fail(line, e.what());
    }
    if (q <= 0) fail(line, "rate constant must be positive");
    return q;
  }

  void parse_line(const std::string& line_text, int line) {
    std::string text = line_text;
    auto hash = text.find('#');
    if (hash != std::string::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) return;

    if (text.rfind("species:", 0) == 0) {
      if (species_declared || !species_order.empty())
        fail(line, "species header must appear once, before any reaction");
      std::istringstream is(text.substr(8));
      std::string name;
      while (is >> name) species_order.push_back(name);
      if (species_order.empty()) fail(line, "species header lists no species");
      species_declared = true;
      return;
    }
    // Any other "word:" prefix is an unknown directive.
    auto colon = text.find(':');
    auto arrow_probe = text.find("->");
    if (colon != std::string::npos && (arrow_probe == std::string::npos || colon < arrow_probe))
      fail(line, "unknown directive '" + text.substr(0, colon) + "'");

    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      std::size_t semi = text.find(';', pos);
      parts.push_back(trim(semi == std::string::npos ? text.substr(pos) : text.substr(pos, semi - pos)));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }

    const std::string& head = parts[0];
    std::size_t rev = head.find("<->");
    if (rev != std::string::npos) {
      if (parts.size() != 3) fail(line, "reversible reaction needs '; kf = ... ; kr = ...'");
      RawComplex lhs = parse_complex(head.substr(0, rev), line);
      RawComplex rhs = parse_complex(head.substr(rev + 3), line);
      Rational kf = parse_rate_clause(parts[1], "kf", line);
      Rational kr = parse_rate_clause(parts[2], "kr", line);
      raw.push_back({lhs, rhs, kf, line});
      raw.push_back({rhs, lhs, kr, line});
      return;
    }
    std::size_t fwd = head.find("->");
    if (fwd == std::string::npos) fail(line, "expected '->' or '<->'");
    if (parts.size() != 2) fail(line, "reaction needs '; k = <value>'");
    RawComplex lhs = parse_complex(head.substr(0, fwd), line);
    RawComplex rhs = parse_complex(head.substr(fwd + 2), line);
    Rational k = parse_rate_clause(parts[1], "k", line);
    raw.push_back({lhs, rhs, k, line});
  }

  Network finish() {
    if (raw.empty()) throw ParseError("no reactions in input");
    SpeciesTable table{species_order};
    std::vector<Reaction> reactions;
    auto build = [&](const RawComplex& rc) {
      Complex c;
      c.coeffs.assign(species_order.size(), 0);
      for (const RawTerm& t : rc.terms) {
        auto idx = table.index_of(t.name);
        c.coeffs[*idx] += t.coeff;  // merges repeated species terms
      }
      return c;
    };
    for (const RawReaction& rr : raw) {
      Reaction rx{build(rr.reactant), build(rr.product), rr.rate};
      if (rx.reactant == rx.product)
        fail(rr.line, "reactant equals product");
      reactions.push_back(std::move(rx));
    }
    return Network(std::move(table), std::move(reactions));
  }
};

}  // namespace

Network parse_network(const std::string& text) {
  Parser p;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) p.parse_line(line, ++lineno);
  return p.finish();
}

std::string format_complex(const Network& net, const Complex& c) {
  if (c.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
    if (c.coeffs[j] == 0) continue;
    if (!first) os << " + ";
    if (c.coeffs[j] != 1) os << c.coeffs[j] << " ";
    os << net.species().names[j];
    first = false;
  }
  return os.str();
}

std::string serialize_network(const Network& net) {
  std::ostringstream os;
  os << "species:";
  for (const std::string& name : net.species().names) os << " " << name;
  os << "\n";
  for (const Reaction& rx : net.reactions()) {
    os << format_complex(net, rx.reactant) << " -> " << format_complex(net, rx.product)
       << " ; k = " << format_rational(rx.rate) << "\n";
  }
  return os.str();
}

}  // namespace crn
