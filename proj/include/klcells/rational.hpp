#ifndef KLCELLS_RATIONAL_HPP
#define KLCELLS_RATIONAL_HPP

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace klcells {

using Rational = boost::rational<std::int64_t>;

/// Largest integer <= a/b for b > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t floor(const Rational& x) {
  return floor_div(x.numerator(), x.denominator());
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

}  // namespace klcells

#endif
