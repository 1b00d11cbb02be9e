#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace gtpush {

using Rational = mpq_class;

// Integer power, negative exponents allowed for nonzero base.
Rational ipow(const Rational& base, long exponent);

// Accepts "p/q" or an integer literal. Decimal or exponent notation is
// rejected so that exact inputs stay exact.
Rational parse_rational(std::string_view text);

// Comma separated list of rationals ("1/2,1/3").
std::vector<Rational> parse_rational_list(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace gtpush
