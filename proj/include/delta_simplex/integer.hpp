#pragma once

// Arbitrary-precision scalars and the error hierarchy shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace delta_simplex {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Errors. Shape/rank/singularity problems are input errors; InvariantViolation
// means a postcondition failed and indicates a bug.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct RankError : Error {
  using Error::Error;
};
struct SingularError : Error {
  using Error::Error;
};
struct NotASimplexError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct OracleScaleError : Error {
  using Error::Error;
};
struct InvalidSystemError : Error {
  using Error::Error;
};
struct InvariantViolation : Error {
  using Error::Error;
};

inline Integer abs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Floor division for any sign combination; b != 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;  // truncates toward zero
  Integer r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// Least non-negative residue; m > 0.
inline Integer mod_floor(const Integer& a, const Integer& m) { return a - floor_div(a, m) * m; }

struct ExtendedGcd {
  Integer g;  // non-negative
  Integer x;
  Integer y;  // a*x + b*y == g
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

inline Integer floor(const Rational& q) {
  return floor_div(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

inline Integer ceil(const Rational& q) {
  return -floor_div(-boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

inline bool is_integral(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::string to_string(const Rational& q) {
  if (is_integral(q)) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

// Parses an optional sign followed by decimal digits; throws on anything else.
inline Integer parse_integer(const std::string& text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9') throw std::invalid_argument("not an integer: '" + text + "'");
  return Integer(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace delta_simplex
