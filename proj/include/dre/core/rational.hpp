#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace dre {

/// Exact arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator by the GMP backend.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "p", "p/q", "-p/q" or a decimal literal such as "12.375" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Closest rational to a double with denominator at most `max_denominator`.
Rational from_double(double value, long max_denominator = 1000000);

inline Rational numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Rational denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

Rational floor(const Rational& r);

}  // namespace dre
