#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

#include "sheafctx/error.hpp"

namespace sheafctx {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double as a rational (mantissa times power of two).
Rational rational_from_double(double x);

/// Best rational approximation to x with denominator <= bound, via the
/// continued-fraction expansion of the exact binary value of x (convergents
/// plus the final semiconvergent, whichever is closer).
Rational rationalize(double x, const BigInt& denominator_bound);

/// Parses "p/q", "p", or a plain integer string. Throws ParseError.
Rational parse_rational(const std::string& text);

/// Lowest-terms "p/q", or just "p" when the denominator is one.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) {
  return value.template convert_to<double>();
}

}  // namespace sheafctx
