#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freemoments {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a decimal literal ("-1.25", "3e-2") into an
/// exact rational. Decimal literals are read exactly, never via a double.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

std::vector<Rational> parse_rationals(std::span<const std::string> texts);
std::vector<std::string> format_rationals(std::span<const Rational> values);

Rational pow(const Rational& base, unsigned exponent);
Integer binomial(unsigned n, unsigned k);
Integer catalan(unsigned n);
Integer factorial(unsigned n);

/// Smallest-denominator-agnostic upper bound on value^(1/n) for value >= 0:
/// exact when value is a perfect n-th power, otherwise rounded up on a
/// 2^-bits dyadic grid.
struct RootBound {
  Rational value;
  bool exact = false;
};
RootBound nth_root_upper(const Rational& value, unsigned n, unsigned bits = 64);

}  // namespace freemoments
