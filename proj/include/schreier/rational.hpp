#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace schreier {

using BigInt = mpz_class;
using Rational = mpq_class;

// Accepts "p/q", "p" and signed forms; the result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

Rational pow2_inverse(unsigned n);
long double to_long_double(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }
inline Rational abs_value(const Rational& q) { return abs(q); }

}  // namespace schreier
