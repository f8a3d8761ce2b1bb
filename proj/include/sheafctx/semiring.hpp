#pragma once

#include <cmath>
#include <string>

#include "sheafctx/rational.hpp"

namespace sheafctx {

/// Absolute tolerance for comparing double-carrier weights. Quantum-derived
/// weights are accurate to near machine precision, so this sits far above
/// accumulated error and far below any model distinction.
inline constexpr double kEta = 1e-9;

/// Exact probability semiring: nonnegative rationals under (+, *).
struct RationalSemiring {
  using Value = Rational;
  static constexpr const char* name = "rational";
  static Value zero() { return Value(0); }
  static Value one() { return Value(1); }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
  static bool eq(const Value& a, const Value& b) { return a == b; }
  static bool is_zero(const Value& a) { return a.is_zero(); }
  static bool valid_weight(const Value& a) { return a >= 0; }
  static std::string to_string(const Value& a) { return format_rational(a); }
};

/// Probability semiring in double precision, compared within kEta. Used for
/// quantum-derived models; exact decisions go through rationalization.
struct DoubleSemiring {
  using Value = double;
  static constexpr const char* name = "double";
  static Value zero() { return 0.0; }
  static Value one() { return 1.0; }
  static Value add(Value a, Value b) { return a + b; }
  static Value mul(Value a, Value b) { return a * b; }
  static bool eq(Value a, Value b) { return std::abs(a - b) <= kEta; }
  static bool is_zero(Value a) { return a == 0.0; }
  static bool valid_weight(Value a) { return a >= 0.0; }
  static std::string to_string(Value a) { return std::to_string(a); }
};

/// Possibilistic (boolean) semiring: or/and.
struct BooleanSemiring {
  using Value = bool;
  static constexpr const char* name = "boolean";
  static Value zero() { return false; }
  static Value one() { return true; }
  static Value add(Value a, Value b) { return a || b; }
  static Value mul(Value a, Value b) { return a && b; }
  static bool eq(Value a, Value b) { return a == b; }
  static bool is_zero(Value a) { return !a; }
  static bool valid_weight(Value) { return true; }
  static std::string to_string(Value a) { return a ? "true" : "false"; }
};

}  // namespace sheafctx
