#pragma once

#include <gmpxx.h>

#include <string>

namespace dbnci {

// All probability arithmetic in this library is exact. Verdicts must never
// depend on floating point, so rationals are GMP-backed throughout.
using Rational = mpq_class;

// Accepts "num/den", plain integers, and decimal text ("0.25", "-3.5").
// Decimals are read digit-by-digit, so "0.2" becomes exactly 1/5.
Rational parse_rational(const std::string& text);

// Canonical "num/den" form with a positive denominator, e.g. "1/2", "-3/1".
std::string format_rational(const Rational& q);

Rational make_rational(long num, long den = 1);

}  // namespace dbnci
