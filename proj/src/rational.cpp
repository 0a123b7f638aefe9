#include "qif/rational.hpp"

#include <cmath>
#include <cstddef>

#include "qif/errors.hpp"

namespace qif {

std::string frac_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

Rational parse_frac(const std::string& text) {
  const std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    const BigInt num(text.substr(0, slash));
    const BigInt den(text.substr(slash + 1));
    if (den == 0) {
      throw DomainError("zero denominator in '" + text + "'");
    }
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw DomainError("malformed rational '" + text + "'");
  }
}

namespace {

double log2_bigint(const BigInt& n) {
  // msb() is floor(log2 n); scale down when the value exceeds double range.
  const unsigned bits = boost::multiprecision::msb(n);
  if (bits < 1000) {
    return std::log2(n.convert_to<double>());
  }
  const unsigned shift = bits - 64;
  const BigInt head = n >> shift;
  return static_cast<double>(shift) + std::log2(head.convert_to<double>());
}

}  // namespace

double to_double(const Rational& r) {
  return r.convert_to<double>();
}

double log2_rational(const Rational& r) {
  if (r <= 0) {
    throw DomainError("log2 of a non-positive rational");
  }
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return log2_bigint(num) - log2_bigint(den);
}

}  // namespace qif
