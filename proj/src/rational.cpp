#include "sheafctx/rational.hpp"

#include <cstdlib>
#include <limits>

namespace sheafctx {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::ParseError, "non-finite double");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53 bits make the mantissa integral.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result(scaled);
  if (exponent >= 0) {
    result *= Rational(BigInt(1) << exponent);
  } else {
    result /= Rational(BigInt(1) << -exponent);
  }
  return result;
}

Rational rationalize(double x, const BigInt& denominator_bound) {
  if (denominator_bound < 1) {
    fail(ErrorCode::ParseError, "denominator bound must be positive");
  }
  const Rational target = rational_from_double(x);
  if (denominator(target) <= denominator_bound) return target;

  // Continued fraction of |target|; track convergents p_k/q_k with the
  // standard recurrence p_k = a_k p_{k-1} + p_{k-2}.
  const bool negative = target < 0;
  const Rational abs_target = boost::multiprecision::abs(target);
  BigInt num = numerator(abs_target);
  BigInt den = denominator(abs_target);

  BigInt p_prev = 0, q_prev = 1;  // p_{k-2}, q_{k-2}
  BigInt p_cur = 1, q_cur = 0;    // p_{k-1}, q_{k-1}
  while (den != 0) {
    BigInt term = num / den;
    BigInt p_next = term * p_cur + p_prev;
    BigInt q_next = term * q_cur + q_prev;
    if (q_next > denominator_bound) {
      // Last admissible semiconvergent against the last full convergent.
      BigInt steps = (denominator_bound - q_prev) / q_cur;
      BigInt p_semi = p_prev + steps * p_cur;
      BigInt q_semi = q_prev + steps * q_cur;
      Rational best(p_cur, q_cur);
      if (q_semi > 0) {
        Rational semi(p_semi, q_semi);
        if (boost::multiprecision::abs(semi - abs_target) <
            boost::multiprecision::abs(best - abs_target)) {
          best = semi;
        }
      }
      return negative ? -best : best;
    }
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    BigInt rem = num - term * den;
    num = den;
    den = rem;
  }
  Rational exact(p_cur, q_cur);
  return negative ? -exact : exact;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) fail(ErrorCode::ParseError, "empty rational literal");
  try {
    return Rational(text);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad rational literal '" + text + "'");
  }
}

std::string format_rational(const Rational& value) {
  return value.str();
}

}  // namespace sheafctx
