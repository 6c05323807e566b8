#include <doctest.h>

#include <random>
#include <vector>

#include "schreier/error.hpp"
#include "schreier/ordinal.hpp"

using schreier::Comparison;
using schreier::Ordinal;

namespace {

Ordinal P(const char* s) { return Ordinal::parse(s); }
Ordinal N(std::uint64_t n) { return Ordinal::natural(n); }

// Ordinals below w^w as coefficient vectors c[k] of w^k, built from the
// order-type description "alpha followed by beta".
struct Poly {
  std::vector<long> c;

  static Poly of(const Ordinal& o) {
    Poly p;
    for (const auto& t : o.terms()) {
      auto k = *t.exponent.to_natural();
      if (p.c.size() <= k) p.c.resize(k + 1);
      p.c[k] = t.coefficient.get_si();
    }
    return p;
  }
  int degree() const {
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
      if (c[k]) return k;
    return -1;
  }
  long at(int k) const { return k < static_cast<int>(c.size()) ? c[k] : 0; }
};

// Appending beta after alpha hides every part of alpha below beta's leading power.
Poly sum(const Poly& a, const Poly& b) {
  int d = b.degree();
  if (d < 0) return a;
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (int k = 0; k < static_cast<int>(r.c.size()); ++k) {
    if (k > d) r.c[k] = a.at(k);
    else if (k == d) r.c[k] = a.at(k) + b.at(k);
    else r.c[k] = b.at(k);
  }
  return r;
}

// alpha * beta is beta copies of alpha: repeated addition over beta's terms
// for finite parts, w^k copies absorb everything below the lead of alpha.
Poly product(const Poly& a, const Poly& b) {
  Poly r;
  int da = a.degree();
  if (da < 0 || b.degree() < 0) return r;
  for (int k = b.degree(); k >= 0; --k) {
    if (!b.at(k)) continue;
    Poly piece;
    if (k == 0) {
      for (long i = 0; i < b.at(0); ++i) piece = sum(piece, a);
    } else {
      piece.c.assign(da + k + 1, 0);
      piece.c[da + k] = b.at(k);
    }
    r = sum(r, piece);
  }
  return r;
}

Comparison cmp_poly(const Poly& a, const Poly& b) {
  int n = static_cast<int>(std::max(a.c.size(), b.c.size()));
  for (int k = n - 1; k >= 0; --k)
    if (a.at(k) != b.at(k)) return a.at(k) < b.at(k) ? Comparison::less : Comparison::greater;
  return Comparison::equal;
}

bool same(const Poly& a, const Poly& b) { return cmp_poly(a, b) == Comparison::equal; }

std::vector<Ordinal> below_w_w() {
  std::vector<Ordinal> out;
  for (int c2 = 0; c2 <= 1; ++c2)
    for (int c1 = 0; c1 <= 2; ++c1)
      for (int c0 = 0; c0 <= 2; ++c0)
        out.push_back(Ordinal::omega_power(N(2), c2) + Ordinal::omega_power(N(1), c1) + N(c0));
  return out;
}

Ordinal random_ordinal(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> terms(0, 3), coef(1, 3), nat(0, 3);
  if (depth == 0) return N(nat(rng));
  Ordinal r;
  int k = terms(rng);
  for (int i = 0; i < k; ++i) r = r + Ordinal::omega_power(random_ordinal(rng, depth - 1), coef(rng));
  return r;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  CHECK(P("w^2+w*3+1").str() == "w^2+w*3+1");
  CHECK(P("w^w").str() == "w^w");
  CHECK(P("w^(w+1)").str() == "w^(w+1)");
  CHECK(P("w^w^2").str() == "w^w^2");
  CHECK(P("w^(w*2)*3+5").str() == "w^(w*2)*3+5");
  CHECK(P("0").str() == "0");
  CHECK(P("  w ^ 2 ").str() == "w^2");
  CHECK(P("1+w") == Ordinal::omega());
  CHECK(P("\xCF\x89^2") == P("w^2"));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Ordinal o = random_ordinal(rng, 3);
    CHECK(Ordinal::parse(o.str()) == o);
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(P("w^"), schreier::ParseError);
  CHECK_THROWS_AS(P("w+"), schreier::ParseError);
  CHECK_THROWS_AS(P("x"), schreier::ParseError);
  CHECK_THROWS_AS(P("(w"), schreier::ParseError);
  try {
    P("w+w+q");
    FAIL("no throw");
  } catch (const schreier::ParseError& e) {
    CHECK(e.position() == 4);
  }
  std::string tower = "w";
  for (int i = 0; i < 16; ++i) tower += "^w";
  CHECK_THROWS_AS(P(tower.c_str()), schreier::ParseError);
  std::string ok = "w";
  for (int i = 0; i < 15; ++i) ok += "^w";
  CHECK(P(ok.c_str()).tower_height() == 16);
}

TEST_CASE("textbook identities") {
  const Ordinal w = Ordinal::omega();
  CHECK(N(1) + w == w);
  CHECK(w + N(1) != w);
  CHECK(N(2) * w == w);
  CHECK(w * N(2) == P("w*2"));
  CHECK((w + N(1)) * N(2) == P("w*2+1"));
  CHECK(w * w == P("w^2"));
  CHECK((w + N(1)) * w == P("w^2"));
  CHECK(w * (w + N(1)) == P("w^2+w"));
  CHECK(omega_pow(w) == P("w^w"));
  CHECK(compare(P("w^w"), P("w^100*7")) == Comparison::greater);
  CHECK(compare(P("w*2+3"), P("w*2+3")) == Comparison::equal);
  CHECK(P("w^2+1") < P("w^2+w"));
}

TEST_CASE("arithmetic below w^w agrees with the order-type oracle") {
  auto xs = below_w_w();
  for (const auto& a : xs)
    for (const auto& b : xs) {
      Poly pa = Poly::of(a), pb = Poly::of(b);
      CHECK(compare(a, b) == cmp_poly(pa, pb));
      CHECK(same(Poly::of(a + b), sum(pa, pb)));
      CHECK(same(Poly::of(a * b), product(pa, pb)));
    }
}

TEST_CASE("algebraic laws on random ordinals") {
  std::mt19937_64 rng(11);
  std::vector<Ordinal> xs;
  for (int i = 0; i < 30; ++i) xs.push_back(random_ordinal(rng, 2));
  for (const auto& a : xs)
    for (const auto& b : xs)
      for (const auto& c : xs) {
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (b < c) {
          CHECK(a + b < a + c);
          CHECK(b + a <= c + a);
        }
      }
  for (const auto& a : xs) {
    CHECK(omega_pow(a) * omega_pow(a) == omega_pow(a + a));
    CHECK(a + Ordinal() == a);
    CHECK(a * N(1) == a);
  }
}

TEST_CASE("fundamental sequences") {
  CHECK(P("w").fundamental(5) == N(5));
  CHECK(P("w^2").fundamental(3) == P("w*3"));
  CHECK(P("w^w").fundamental(3) == P("w^3"));
  CHECK(P("w^2+w").fundamental(2) == P("w^2+2"));
  CHECK(P("w*3").fundamental(4) == P("w*2+4"));
  CHECK(P("w^(w+1)").fundamental(2) == P("w^w*2"));
  CHECK(P("w^w^w").fundamental(2) == P("w^w^2"));
  CHECK_THROWS_AS(P("w+1").fundamental(1), schreier::DomainError);
  CHECK_THROWS_AS(P("w").fundamental(0), schreier::DomainError);

  std::mt19937_64 rng(3);
  int limits = 0;
  for (int i = 0; i < 300; ++i) {
    Ordinal l = random_ordinal(rng, 3);
    if (!l.is_limit()) continue;
    ++limits;
    Ordinal prev = l.fundamental(1);
    CHECK(prev < l);
    for (std::uint64_t n = 2; n <= 6; ++n) {
      Ordinal cur = l.fundamental(n);
      CHECK(prev < cur);
      CHECK(cur < l);
      prev = cur;
    }
    // every beta < lambda is eventually passed
    Ordinal beta = l.fundamental(3) + N(1);
    CHECK(beta < l.fundamental(4) + N(1));
  }
  CHECK(limits > 50);
}

TEST_CASE("classification") {
  CHECK(P("0").is_zero());
  CHECK(P("5").is_successor());
  CHECK(P("w+1").is_successor());
  CHECK(P("w+1").predecessor() == P("w"));
  CHECK(P("w^2").is_limit());
  CHECK(P("7").to_natural() == 7u);
  CHECK(!P("w").to_natural());
}
