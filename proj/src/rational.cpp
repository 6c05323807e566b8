#include "schreier/rational.hpp"

#include <cctype>
#include <cmath>

#include "schreier/error.hpp"

namespace schreier {

namespace {

bool valid_integer(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

BigInt to_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num)) throw ParseError("bad rational numerator '" + std::string(text) + "'", 0);
  if (!valid_integer(den) || den.front() == '-')
    throw ParseError("bad rational denominator '" + std::string(text) + "'", slash == std::string_view::npos ? 0 : slash + 1);
  BigInt d = to_integer(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 1);
  Rational q(to_integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string to_string(const BigInt& z) { return z.get_str(10); }

Rational pow2_inverse(unsigned n) {
  BigInt d = 1;
  d <<= n;
  return Rational(BigInt(1), d);
}

long double to_long_double(const Rational& q) {
  if (q == 0) return 0.0L;
  BigInt num = abs(q.get_num());
  const BigInt& den = q.get_den();
  // scale so that the integer quotient carries about 70 significant bits
  long shift = 70 - static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) +
               static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  if (shift > 0)
    num <<= static_cast<mp_bitcnt_t>(shift);
  else
    num >>= static_cast<mp_bitcnt_t>(-shift);
  BigInt quotient = num / den;
  BigInt high = quotient >> 64;
  BigInt low = quotient - (high << 64);
  long double value = std::ldexp(static_cast<long double>(mpz_get_ui(high.get_mpz_t())), 64) +
                      static_cast<long double>(mpz_get_ui(low.get_mpz_t()));
  value = std::ldexp(value, static_cast<int>(-shift));
  return sgn(q) < 0 ? -value : value;
}

}  // namespace schreier
