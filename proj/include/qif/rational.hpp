#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace qif {

using BigInt = boost::multiprecision::cpp_int;

// All probability mass is carried as exact rationals; base-2 logarithms are
// taken only when a measure is finally evaluated. cpp_rational keeps values
// reduced with a positive denominator, which is the canonical form we need.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num, den);
}

// "3/4"; integral values render without the denominator ("1", "5").
std::string frac_string(const Rational& r);

// Accepts "num/den" and plain "num". Throws DomainError on malformed input
// or a zero denominator.
Rational parse_frac(const std::string& text);

double to_double(const Rational& r);

// log2 of a positive rational, accurate also when the parts exceed the
// double range. Throws DomainError for r <= 0.
double log2_rational(const Rational& r);

}  // namespace qif
