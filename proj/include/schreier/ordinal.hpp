#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schreier/rational.hpp"

namespace schreier {

// Height of exponent towers accepted by the parser and produced by arithmetic.
inline constexpr unsigned kMaxTowerHeight = 16;

enum class Comparison { less, equal, greater };

// Ordinal below epsilon_0 in Cantor normal form
//   w^{a_1}*c_1 + ... + w^{a_k}*c_k,  a_1 > ... > a_k,  c_i >= 1.
class Ordinal {
 public:
  struct Term;

  Ordinal();
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal natural(const BigInt& n);
  static Ordinal natural(std::uint64_t n) { return natural(BigInt(static_cast<unsigned long>(n))); }
  static Ordinal omega();
  static Ordinal omega_power(const Ordinal& exponent, const BigInt& coefficient = 1);

  // Grammar: expr := term ('+' term)*, term := nat | 'w' ['^' atom] ['*' nat],
  // atom := nat | 'w' ['^' atom] | '(' expr ')'.  "w^w^2" is w^(w^2).
  static Ordinal parse(std::string_view text, unsigned max_height = kMaxTowerHeight);

  const std::vector<Term>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_finite() const noexcept;
  bool is_successor() const noexcept;
  bool is_limit() const noexcept { return !is_zero() && !is_successor(); }

  std::optional<std::uint64_t> to_natural() const;
  Ordinal predecessor() const;
  // n-th member of the canonical sequence; requires a limit and n >= 1.
  Ordinal fundamental(std::uint64_t n) const;
  unsigned tower_height() const noexcept;

  std::string str() const;

  friend Comparison compare(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b) { return compare(a, b) == Comparison::equal; }
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  explicit Ordinal(std::vector<Term> terms);

  friend Ordinal operator+(const Ordinal&, const Ordinal&);
  friend Ordinal operator*(const Ordinal&, const Ordinal&);

  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  BigInt coefficient;
};

Ordinal operator+(const Ordinal& a, const Ordinal& b);
Ordinal operator*(const Ordinal& a, const Ordinal& b);
Ordinal omega_pow(const Ordinal& a);

}  // namespace schreier
