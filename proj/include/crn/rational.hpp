#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

using Rational = boost::multiprecision::mpq_rational;

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

/// Parse "3", "-4/7", "0.25" or "2.5e-3" into an exact rational.
/// Decimal inputs convert exactly (0.5 becomes 1/2, never a binary float).
Rational parse_rational(const std::string& text);

/// Render as "p/q", or just "p" when the denominator is one.
std::string format_rational(const Rational& q);

inline Rational rational_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return static_cast<double>(q); }

class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crn
