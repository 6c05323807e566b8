#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Each works straight from a definition, by exhaustion.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "schreier/error.hpp"
#include "schreier/family_ops.hpp"
#include "schreier/lp.hpp"
#include "schreier/norm.hpp"
#include "schreier/weaknull.hpp"

namespace oracle {

using namespace schreier;

inline FinSet slice(const FinSet& e, std::size_t from, std::size_t to) {
  return FinSet(std::vector<Nat>(e.vec().begin() + static_cast<long>(from), e.vec().begin() + static_cast<long>(to)));
}

// Straight from the recursive definition, trying every split into successive pieces.
inline bool schreier_oracle(const Ordinal& xi, const FinSet& e) {
  if (e.empty()) return true;
  if (xi.is_zero()) return e.size() == 1;
  if (xi.is_limit()) return schreier_oracle(xi.fundamental(e.min()) + Ordinal::natural(1), e);
  Ordinal eta = xi.predecessor();
  std::function<bool(std::size_t, std::size_t)> split = [&](std::size_t from, std::size_t pieces_left) {
    if (from == e.size()) return true;
    if (pieces_left == 0) return false;
    for (std::size_t to = from + 1; to <= e.size(); ++to)
      if (schreier_oracle(eta, slice(e, from, to)) && split(to, pieces_left - 1)) return true;
    return false;
  };
  return split(0, e.min());
}

using Weights = std::map<Nat, Rational>;

inline std::vector<Nat> remove_support(const std::vector<Nat>& m, const Weights& w) {
  std::vector<Nat> out;
  for (Nat x : m)
    if (!w.count(x)) out.push_back(x);
  return out;
}

// Literal recursion over a finite prefix: S^{xi+1}_{M,1} averages S^xi_{M,i},
// i <= p_1, and later indices restart on M with earlier supports deleted.
inline Weights ravg_oracle(const Ordinal& xi, const std::vector<Nat>& m, std::size_t n) {
  if (m.empty()) throw BoundError("prefix too short");
  if (xi.is_zero()) {
    if (m.size() < n) throw BoundError("prefix too short");
    return {{m[n - 1], Rational(1)}};
  }
  std::vector<Nat> rest = m;
  for (std::size_t k = 1; k < n; ++k) rest = remove_support(rest, ravg_oracle(xi, rest, 1));
  if (rest.empty()) throw BoundError("prefix too short");
  Nat p = rest.front();
  if (xi.is_limit()) return ravg_oracle(xi.fundamental(p) + Ordinal::natural(1), rest, 1);
  Weights out;
  for (std::size_t i = 1; i <= p; ++i)
    for (const auto& [x, w] : ravg_oracle(xi.predecessor(), rest, i)) out[x] += w / Rational(BigInt(static_cast<unsigned long>(p)));
  return out;
}

// max over all subsets E of supp x with E in S(gamma)
inline Rational schreier_oracle(const Family& f, const SparseVector& x) {
  const auto& en = x.entries();
  Rational best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << en.size()); ++mask) {
    std::vector<Nat> e;
    Rational s = 0;
    for (std::size_t i = 0; i < en.size(); ++i)
      if (mask >> i & 1) {
        e.push_back(en[i].first);
        s += abs(en[i].second);
      }
    if (s > best && f.contains(FinSet(e))) best = s;
  }
  return best;
}

// All families of pairwise incomparable segments {t : s <= t <= u}. The
// families depend only on the tree, so they are listed once.
struct TreeOracle {
  std::vector<std::vector<Nat>> segments;
  std::vector<std::vector<std::size_t>> families;

  explicit TreeOracle(const Tree& t) {
    for (Nat s = 1; s <= t.size(); ++s)
      for (Nat u = 1; u <= t.size(); ++u)
        if (t.ancestor_or_equal(s, u)) {
          std::vector<Nat> seg;
          for (Nat v = 1; v <= t.size(); ++v)
            if (t.ancestor_or_equal(s, v) && t.ancestor_or_equal(v, u)) seg.push_back(v);
          segments.push_back(seg);
        }
    const std::size_t k = segments.size();
    std::vector<std::vector<bool>> clash(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (Nat a : segments[i])
          for (Nat b : segments[j])
            if (t.comparable(a, b)) clash[i][j] = true;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> go = [&](std::size_t from) {
      families.push_back(chosen);
      for (std::size_t i = from; i < k; ++i) {
        bool ok = true;
        for (std::size_t j : chosen) ok = ok && !clash[i][j];
        if (!ok) continue;
        chosen.push_back(i);
        go(i + 1);
        chosen.pop_back();
      }
    };
    go(0);
  }

  Rational eval(const SparseVector& x) const {
    std::vector<Rational> peak;
    for (const auto& seg : segments) {
      Rational mx = 0;
      for (Nat a : seg) mx = std::max(mx, Rational(abs(x[a])));
      peak.push_back(mx);
    }
    Rational best = 0;
    for (const auto& fam : families) {
      Rational acc = 0;
      for (std::size_t i : fam) acc += peak[i];
      best = std::max(best, acc);
    }
    return best;
  }
};

inline Rational tree_oracle(const Tree& t, const SparseVector& x) { return TreeOracle(t).eval(x); }

inline void forests(const NodePath& prefix, std::size_t k, Nat first, std::vector<std::vector<NodePath>>& out) {
  if (k == 0) {
    out.push_back({});
    return;
  }
  for (std::size_t j = 1; j <= k; ++j) {
    NodePath root = prefix;
    root.push_back(first);
    std::vector<std::vector<NodePath>> below, rest;
    forests(root, j - 1, 1, below);
    forests(prefix, k - j, first + 1, rest);
    for (const auto& b : below)
      for (const auto& r : rest) {
        std::vector<NodePath> f{root};
        f.insert(f.end(), b.begin(), b.end());
        f.insert(f.end(), r.begin(), r.end());
        out.push_back(f);
      }
  }
}

// Z norm straight from the definition: every family of intervals inside
// [1, K], interval norms by recursion, the self term solved by bisection.
struct ZOracle {
  const NormEngine& engine;
  Nat k;
  std::size_t levels = 40;
  std::vector<Family> fam;
  std::map<SparseVector, long double, bool (*)(const SparseVector&, const SparseVector&)> memo{
      [](const SparseVector& a, const SparseVector& b) { return a.str() < b.str(); }};

  ZOracle(const NormEngine& e, Nat k_) : engine(e), k(k_) {
    for (std::size_t n = 1; n <= levels; ++n) fam.push_back(Family::schreier(e.z_level(n)));
  }

  long double eval(const SparseVector& y) {
    if (y.is_zero()) return 0;
    if (auto it = memo.find(y); it != memo.end()) return it->second;
    const long double theta = to_long_double(engine.vartheta());
    const long double base = to_long_double(engine.base().exact_norm(y));
    // per level: best (sum of proper pieces, number of whole-vector pieces)
    std::vector<std::vector<std::pair<long double, int>>> options(levels);
    std::vector<std::pair<Nat, Nat>> chosen;
    std::function<void(Nat, std::vector<Nat>&, long double, int)> go = [&](Nat from, std::vector<Nat>& mins,
                                                                          long double acc, int whole) {
      for (std::size_t n = 0; n < levels; ++n)
        if (fam[n].contains(FinSet(mins))) options[n].emplace_back(acc, whole);
      for (Nat lo = from; lo <= k; ++lo)
        for (Nat hi = lo; hi <= k; ++hi) {
          SparseVector piece = y.interval(lo, hi);
          if (piece.is_zero()) continue;
          mins.push_back(lo);
          if (piece == y)
            go(hi + 1, mins, acc, whole + 1);
          else
            go(hi + 1, mins, acc + eval(piece), whole);
          mins.pop_back();
        }
    };
    std::vector<Nat> mins;
    go(1, mins, 0, 0);
    auto phi = [&](long double t) {
      long double s = 0, th = theta;
      for (std::size_t n = 0; n < levels; ++n) {
        th /= 2;
        long double best = 0;
        for (auto [a, w] : options[n]) best = std::max(best, a + w * t);
        s += th * th * best * best;
      }
      return std::max(base, std::sqrt(s));
    };
    long double lo = 0, hi = to_long_double(y.l1()) + 1;
    for (int i = 0; i < 200; ++i) {
      long double mid = (lo + hi) / 2;
      (phi(mid) > mid ? lo : hi) = mid;
    }
    memo.emplace(y, lo);
    return lo;
  }
};

inline SparseVector combine(const Instance& inst, const FinSet& f, std::span<const int> s, std::span<const Rational> a) {
  SparseVector y;
  for (std::size_t j = 0; j < f.size(); ++j) y = y + Rational(s.empty() ? 1 : s[j]) * a[j] * inst.at(f[j]);
  return y;
}

// Every extreme functional of the norm on coordinates 1..n.
inline std::vector<SparseVector> all_functionals(const NormEngine& e, Nat n) {
  std::vector<FinSet> sets;
  switch (e.kind()) {
    case NormEngine::Kind::ell1:
      sets.push_back(FinSet::interval(1, n));
      break;
    case NormEngine::Kind::sup:
      for (Nat k = 1; k <= n; ++k) sets.push_back(FinSet{k});
      break;
    case NormEngine::Kind::schreier:
      sets = enumerate_restriction(Family::schreier(e.ordinal()), n);
      break;
    default:
      throw std::logic_error("no functional list for this kind");
  }
  std::vector<SparseVector> out;
  for (const FinSet& s : sets)
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << s.size()); ++b) {
      std::vector<SparseVector::Entry> f;
      for (std::size_t i = 0; i < s.size(); ++i) f.emplace_back(s[i], (b >> i & 1) ? Rational(-1) : Rational(1));
      out.emplace_back(std::move(f));
    }
  return out;
}

inline Rational lp_oracle(const Instance& inst, const FinSet& f, std::span<const int> s, Nat n) {
  const std::size_t k = f.size();
  LinearProgram lp(k + 1);
  std::vector<Rational> ones(k + 1, 1);
  ones[k] = 0;
  lp.add_constraint(ones, Relation::eq, 1);
  for (const auto& fn : all_functionals(inst.engine, n)) {
    std::vector<Rational> row;
    for (std::size_t j = 0; j < k; ++j) row.push_back(Rational(s.empty() ? 1 : s[j]) * fn.dot(inst.at(f[j])));
    row.push_back(-1);
    lp.add_constraint(row, Relation::le, 0);
  }
  std::vector<Rational> obj(k + 1, 0);
  obj[k] = 1;
  lp.minimize(obj);
  return lp.solve().value;
}

// minimum over simplex points with denominators <= 6 (vertices included)
inline Rational grid_oracle(const Instance& inst, const FinSet& f, std::span<const int> s) {
  const std::size_t k = f.size();
  std::optional<Rational> best;
  for (unsigned d = 1; d <= 6; ++d) {
    std::vector<unsigned> parts(k);
    std::function<void(std::size_t, unsigned)> go = [&](std::size_t j, unsigned left) {
      if (j + 1 == k) {
        parts[j] = left;
        std::vector<Rational> a;
        for (unsigned p : parts) {
          Rational q(p, d);
          q.canonicalize();
          a.push_back(q);
        }
        Rational v = inst.engine.exact_norm(combine(inst, f, s, a));
        if (!best || v < *best) best = v;
        return;
      }
      for (unsigned p = 0; p <= left; ++p) {
        parts[j] = p;
        go(j + 1, left - p);
      }
    };
    go(0, d);
  }
  return *best;
}

}  // namespace oracle
