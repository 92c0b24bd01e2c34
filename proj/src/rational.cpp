#include "crn/rational.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstdlib>

namespace crn {

using Integer = boost::multiprecision::mpz_int;

namespace {

// GMP's string constructors read a leading zero as octal; force base 10.
std::string strip_leading_zeros(const std::string& s) {
  std::string sign;
  std::size_t pos = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    if (s[0] == '-') sign = "-";
    pos = 1;
  }
  std::size_t first = s.find_first_not_of('0', pos);
  if (first == std::string::npos) return "0";
  return sign + s.substr(first);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError("empty numeric literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty()) throw ParseError("malformed fraction '" + text + "'");
    try {
      Integer d(strip_leading_zeros(den));
      if (d == 0) throw ParseError("zero denominator in '" + text + "'");
      Rational q{Integer(strip_leading_zeros(num)), d};
      return q;
    } catch (const std::exception&) {
      throw ParseError("malformed fraction '" + text + "'");
    }
  }

  // decimal / scientific form: [sign] digits [. digits] [e exp]
  bool negative = false;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = (s[pos] == '-');
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  long exponent = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (ch == '.') {
      if (seen_dot) throw ParseError("malformed number '" + text + "'");
      seen_dot = true;
    } else if (ch == 'e' || ch == 'E') {
      std::string exp_part = s.substr(pos + 1);
      if (exp_part.empty()) throw ParseError("malformed number '" + text + "'");
      char* end = nullptr;
      exponent = std::strtol(exp_part.c_str(), &end, 10);
      if (end == nullptr || *end != '\0') throw ParseError("malformed number '" + text + "'");
      break;
    } else {
      throw ParseError("malformed number '" + text + "'");
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + text + "'");

  Integer mantissa(strip_leading_zeros(digits));
  if (negative) mantissa = -mantissa;
  long power = exponent - frac_digits;
  Rational q(mantissa);
  Integer ten(10);
  if (power > 0) {
    q *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(power)));
  } else if (power < 0) {
    q /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-power)));
  }
  return q;
}

std::string format_rational(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1)
    return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

}  // namespace crn
