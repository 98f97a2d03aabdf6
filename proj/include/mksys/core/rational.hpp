#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace mksys {

using Rational = mpq_class;

// Always "p/q" in lowest terms, including integers ("1/1", "0/1").
std::string to_string(const Rational& q);

// Accepts "p/q" or "p"; the result is canonicalized.
Rational parse_rational(std::string_view text);

std::string to_decimal(const Rational& q, int digits = 6);

}  // namespace mksys
