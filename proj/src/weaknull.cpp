#include "schreier/weaknull.hpp"

#include <algorithm>
#include <cmath>

#include "schreier/error.hpp"
#include "schreier/family_ops.hpp"
#include "schreier/lp.hpp"
#include "schreier/ravg.hpp"

namespace schreier {

const SparseVector& Instance::at(std::size_t i) const {
  if (i == 0 || i > vectors.size())
    throw DomainError("instance has no vector " + std::to_string(i) + " (length " + std::to_string(vectors.size()) + ")");
  return vectors[i - 1];
}

Instance Instance::basis(const NormEngine& engine, std::size_t n) {
  Instance inst{engine, {}};
  for (std::size_t i = 1; i <= n; ++i) inst.vectors.push_back(SparseVector::basis(i));
  return inst;
}

namespace {

constexpr std::size_t kMaxCuts = 100000;
constexpr std::size_t kGridPoints = 3000;

SparseVector combine(std::span<const SparseVector> ys, std::span<const Rational> a) {
  SparseVector y;
  for (std::size_t j = 0; j < ys.size(); ++j) y = y + a[j] * ys[j];
  return y;
}

struct Cuts {
  std::vector<std::vector<Rational>> rows;  // f(y_j) per cut

  void add(const SparseVector& functional, std::span<const SparseVector> ys) {
    std::vector<Rational> r;
    for (const auto& y : ys) r.push_back(functional.dot(y));
    rows.push_back(std::move(r));
  }
};

ConvexMin exact_min(const NormEngine& engine, std::span<const SparseVector> ys, bool lexicographic) {
  const std::size_t k = ys.size();
  Cuts cuts;
  std::size_t rounds = 0;
  auto guard = [&] {
    if (++rounds > kMaxCuts) throw BoundError("cutting planes did not close within the iteration cap");
  };

  // minimize t over the simplex subject to the current cuts
  std::vector<Rational> a;
  Rational value;
  while (true) {
    guard();
    LinearProgram lp(k + 1);
    std::vector<Rational> ones(k + 1, 1);
    ones[k] = 0;
    lp.add_constraint(ones, Relation::eq, 1);
    for (const auto& r : cuts.rows) {
      std::vector<Rational> row = r;
      row.push_back(-1);
      lp.add_constraint(std::move(row), Relation::le, 0);
    }
    std::vector<Rational> obj(k + 1, 0);
    obj[k] = 1;
    lp.minimize(obj);
    LpSolution s = lp.solve();
    if (s.status != LpSolution::Status::optimal) throw DomainError("restricted program is not solvable");
    a.assign(s.x.begin(), s.x.begin() + static_cast<std::ptrdiff_t>(k));
    NormResult r = engine.norm(combine(ys, a));
    if (r.value <= s.x[k]) {
      value = r.value;
      break;
    }
    cuts.add(r.certificate.functional, ys);
  }

  if (lexicographic) {
    // lexicographically smallest point of { a : |y(a)| <= value }
    std::vector<Rational> fixed;
    for (std::size_t i = 0; i < k; ++i) {
      while (true) {
        guard();
        LinearProgram lp(k);
        lp.add_constraint(std::vector<Rational>(k, 1), Relation::eq, 1);
        for (std::size_t j = 0; j < fixed.size(); ++j) {
          std::vector<Rational> e(k, 0);
          e[j] = 1;
          lp.add_constraint(std::move(e), Relation::eq, fixed[j]);
        }
        for (const auto& r : cuts.rows) lp.add_constraint(r, Relation::le, value);
        std::vector<Rational> obj(k, 0);
        obj[i] = 1;
        lp.minimize(obj);
        LpSolution s = lp.solve();
        if (s.status != LpSolution::Status::optimal) throw DomainError("lexicographic stage is not solvable");
        NormResult r = engine.norm(combine(ys, s.x));
        if (r.value <= value) {
          fixed.push_back(s.x[i]);
          a = s.x;
          break;
        }
        cuts.add(r.certificate.functional, ys);
      }
    }
  }
  ConvexMin out;
  out.value = value;
  out.approx = to_long_double(value);
  out.coefficients = std::move(a);
  out.cuts = cuts.rows.size();
  return out;
}

ConvexMin grid_min(const NormEngine& engine, std::span<const SparseVector> ys) {
  const std::size_t k = ys.size();
  // largest denominator whose grid stays under the point budget
  auto points = [k](std::size_t d) {
    long double c = 1;
    for (std::size_t i = 1; i < k; ++i) c = c * static_cast<long double>(d + i) / static_cast<long double>(i);
    return c;
  };
  std::size_t d = 1;
  while (d < 24 && points(d + 1) <= kGridPoints) ++d;

  ConvexMin out;
  out.exact = false;
  long double worst_error = 0, max_norm = 0;
  for (const auto& y : ys) {
    NormResult r = engine.norm(y);
    max_norm = std::max(max_norm, r.approx + r.error_bound);
  }
  std::vector<std::size_t> parts(k, 0);
  bool first = true;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t j, std::size_t left) {
    if (j + 1 == k) {
      parts[j] = left;
      std::vector<Rational> a;
      for (std::size_t p : parts) {
        Rational q(static_cast<unsigned long>(p), static_cast<unsigned long>(d));
        q.canonicalize();
        a.push_back(q);
      }
      NormResult r = engine.norm(combine(ys, a));
      worst_error = std::max(worst_error, r.error_bound);
      if (first || r.approx < out.approx) {
        out.approx = r.approx;
        out.coefficients = std::move(a);
        first = false;
      }
      return;
    }
    for (std::size_t p = 0; p <= left; ++p) {
      parts[j] = p;
      go(j + 1, left - p);
    }
  };
  go(0, d);
  out.gap_bound = 2.0L * static_cast<long double>(k) / static_cast<long double>(d) * max_norm + 2 * worst_error;
  return out;
}

std::vector<SparseVector> signed_vectors(const Instance& inst, const FinSet& f, std::span<const int> signs) {
  if (f.empty()) throw DomainError("min_convex needs a non-empty F");
  if (!signs.empty() && signs.size() != f.size()) throw DomainError("one sign per element of F is required");
  std::vector<SparseVector> ys;
  for (std::size_t j = 0; j < f.size(); ++j) {
    int s = signs.empty() ? 1 : signs[j];
    if (s != 1 && s != -1) throw DomainError("signs must be +1 or -1");
    ys.push_back(Rational(s) * inst.at(f[j]));
  }
  return ys;
}

long double as_number(const ConvexMin& c) { return c.exact ? to_long_double(c.value) : c.approx; }

bool at_least(const ConvexMin& c, const Rational& eps) {
  return c.exact ? c.value >= eps : c.approx >= to_long_double(eps);
}

std::vector<int> pattern(std::size_t k, std::uint64_t bits) {
  // first sign fixed to +1: a global flip leaves every norm unchanged
  std::vector<int> s(k, 1);
  for (std::size_t j = 1; j < k; ++j) s[j] = (bits >> (j - 1) & 1) ? -1 : 1;
  return s;
}

bool maximal_in(const Family& fam, const FinSet& e, Nat n) {
  for (Nat j = 1; j <= n; ++j) {
    if (e.contains(j)) continue;
    std::vector<Nat> v = e.vec();
    v.insert(std::upper_bound(v.begin(), v.end(), j), j);
    if (fam.contains(FinSet(std::move(v)))) return false;
  }
  return true;
}

}  // namespace

ConvexMin min_convex(const Instance& inst, const FinSet& f, std::span<const int> signs, bool lexicographic) {
  std::vector<SparseVector> ys = signed_vectors(inst, f, signs);
  if (inst.engine.exact()) return exact_min(inst.engine, ys, lexicographic);
  return grid_min(inst.engine, ys);
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::plain:
      return "plain";
    case Variant::a:
      return "a";
    case Variant::sigma:
      return "sigma";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "plain") return Variant::plain;
  if (s == "a") return Variant::a;
  if (s == "sigma") return Variant::sigma;
  throw ParseError("unknown family variant '" + s + "'", 0);
}

bool f_membership(const Instance& inst, const FinSet& f, const Rational& eps, Variant variant) {
  if (f.empty()) return true;
  if (variant == Variant::plain) return at_least(min_convex(inst, f, {}, false), eps);
  const std::uint64_t patterns = std::uint64_t{1} << (f.size() - 1);
  for (std::uint64_t b = 0; b < patterns; ++b) {
    auto s = pattern(f.size(), b);
    bool ok = at_least(min_convex(inst, f, s, false), eps);
    if (variant == Variant::a && ok) return true;
    if (variant == Variant::sigma && !ok) return false;
  }
  return variant == Variant::sigma;
}

CertReport spreading_certificate(const Instance& inst, const Ordinal& xi, const Rational& eps, Nat n, Nat bound) {
  if (n > bound) throw BoundError("N exceeds the enumeration bound " + std::to_string(bound));
  if (n > inst.size()) throw DomainError("instance has " + std::to_string(inst.size()) + " vectors, N is " + std::to_string(n));
  Family fam = Family::schreier(xi);
  CertReport rep;
  rep.family = "S_" + xi.str();
  rep.epsilon = eps;
  rep.exact = inst.engine.exact();
  bool have = false;
  for (const FinSet& e : enumerate_restriction(fam, n, bound)) {
    if (e.empty() || !maximal_in(fam, e, n)) continue;
    ++rep.sets_checked;
    SetMargin row{e, {}, 0, 0};
    const std::uint64_t patterns = std::uint64_t{1} << (e.size() - 1);
    for (std::uint64_t b = 0; b < patterns; ++b) {
      auto s = pattern(e.size(), b);
      ConvexMin c = min_convex(inst, e, s, false);
      const long double margin = as_number(c) - to_long_double(eps);
      if (b == 0 || (rep.exact ? c.value - eps < row.margin : margin < row.margin_approx)) {
        row.signs = s;
        row.margin = rep.exact ? Rational(c.value - eps) : Rational(0);
        row.margin_approx = margin;
      }
      const bool worse = !have || (rep.exact ? c.value - eps < rep.worst_margin : margin < rep.worst_margin_approx);
      if (!at_least(c, eps) && !rep.first_failure) rep.first_failure = e;
      if (worse) {
        have = true;
        rep.worst_set = e;
        rep.worst_signs = s;
        rep.worst_margin = rep.exact ? Rational(c.value - eps) : Rational(0);
        rep.worst_margin_approx = margin;
      }
    }
    rep.margins.push_back(std::move(row));
  }
  rep.passed = !rep.first_failure.has_value();
  if (have) {
    ConvexMin c = min_convex(inst, rep.worst_set, rep.worst_signs, true);
    rep.argmin = c.coefficients;
  }
  return rep;
}

NullReport ravg_null_test(const Instance& inst, const Ordinal& xi, const LazySet& m, const NullTestOptions& opt) {
  if (opt.depth == 0) throw DomainError("depth must be positive");
  if (opt.head_length > 20) throw DomainError("head length is limited to 20");
  std::vector<std::pair<std::string, LazySet>> samples{{"M", m}};
  const std::vector<Nat> head = m.prefix(opt.head_length);
  const std::uint64_t full = (std::uint64_t{1} << head.size()) - 1;
  for (std::uint64_t mask = 0; mask < full && samples.size() < opt.max_samples; ++mask) {
    std::vector<Nat> h;
    for (std::size_t i = 0; i < head.size(); ++i)
      if (mask >> i & 1) h.push_back(head[i]);
    FinSet hs(std::move(h));
    samples.emplace_back(hs.str() + " + M[>" + std::to_string(head.size()) + "]", m.splice(hs, head.size()));
  }
  NullReport rep;
  for (const auto& [name, set] : samples) {
    ++rep.samples;
    for (std::size_t n = 1; n <= opt.depth; ++n) {
      Measure mu = ravg_measure(xi, set, n);
      Nat need = mu.support().max();
      if (need > inst.size())
        throw DomainError("prefix too short: vectors up to index " + std::to_string(need) + " are required");
      SparseVector v;
      for (const auto& [i, w] : mu.weights()) v = v + w * inst.at(i);
      NullRow row;
      row.sample = name;
      row.n = n;
      Rational one_over_n(1, static_cast<unsigned long>(n));
      one_over_n.canonicalize();
      row.delta = n <= opt.deltas.size() ? opt.deltas[n - 1] : one_over_n;
      NormResult r = inst.engine.norm(v);
      row.approx = r.approx;
      if (inst.engine.exact()) {
        row.value = r.value;
        row.ok = r.value < row.delta;
      } else {
        row.ok = r.approx + r.error_bound < to_long_double(row.delta);
      }
      if (!row.ok && !rep.first_failure) rep.first_failure = row;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.passed = !rep.first_failure.has_value();
  return rep;
}

std::string outcome_name(DichotomyResult::Outcome o) {
  switch (o) {
    case DichotomyResult::Outcome::certificate_i:
      return "certificate_i";
    case DichotomyResult::Outcome::certificate_ii:
      return "certificate_ii";
    case DichotomyResult::Outcome::inconclusive:
      return "inconclusive";
  }
  return "?";
}

DichotomyResult dichotomy_search(const Instance& inst, const Ordinal& xi, const Rational& eps, std::size_t depth) {
  DichotomyResult res;
  res.note =
      "finite search: (i) is checked on one greedy prefix, (ii) on sampled N only; neither settles the infinite "
      "statement";
  if (depth == 0 || depth > 20) throw DomainError("depth must lie in 1..20");
  Family fam = Family::schreier(xi);
  const std::size_t n_inst = inst.size();
  auto eps_l = to_long_double(eps);

  // (i): extend greedily while every new maximal S_xi set stays above eps
  std::vector<Nat> m;
  std::optional<Rational> eps1;
  long double eps1_approx = 0;
  bool stuck = false;
  for (std::size_t d = 1; d <= depth && !stuck; ++d) {
    std::vector<FinSet> fresh;
    for (const FinSet& g : enumerate_restriction(fam, d, 24))
      if (g.contains(d) && maximal_in(fam, g, d)) fresh.push_back(g);
    bool accepted = false;
    for (Nat c = m.empty() ? 1 : m.back() + 1; c <= n_inst && !accepted; ++c) {
      std::vector<Nat> cand = m;
      cand.push_back(c);
      std::optional<Rational> worst;
      long double worst_approx = 0;
      bool ok = true;
      for (const FinSet& g : fresh) {
        std::vector<Nat> image;
        for (Nat p : g) image.push_back(cand[p - 1]);
        ConvexMin cm = min_convex(inst, FinSet(image), {}, false);
        const long double v = as_number(cm);
        if (cm.exact ? cm.value <= eps : v <= eps_l) {
          ok = false;
          break;
        }
        if (cm.exact && (!worst || cm.value < *worst)) worst = cm.value;
        if (!cm.exact && (worst_approx == 0 || v < worst_approx)) worst_approx = v;
      }
      if (!ok) continue;
      accepted = true;
      m = std::move(cand);
      if (worst && (!eps1 || *worst < *eps1)) eps1 = worst;
      if (worst_approx > 0 && (eps1_approx == 0 || worst_approx < eps1_approx)) eps1_approx = worst_approx;
    }
    if (!accepted) stuck = true;
  }
  if (!stuck && m.size() == depth) {
    res.found_i = true;
    res.m_prefix = m;
    if (eps1)
      res.eps1 = *eps1;
    else
      res.eps1 = Rational(static_cast<double>(eps1_approx));
  }

  // (ii): N = H followed by every integer past max H, H a non-empty subset of [depth]
  std::optional<Rational> best;
  long double best_approx = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << depth); ++mask) {
    std::vector<Nat> h;
    for (std::size_t i = 0; i < depth; ++i)
      if (mask >> i & 1) h.push_back(i + 1);
    FinSet hs(h);
    Measure mu;
    try {
      mu = ravg_measure(xi, LazySet::naturals().splice(hs, h.back()), 1);
    } catch (const BoundError&) {
      continue;
    }
    if (mu.support().max() > n_inst) continue;
    SparseVector v;
    for (const auto& [i, w] : mu.weights()) v = v + w * inst.at(i);
    NormResult r = inst.engine.norm(v);
    const bool better = inst.engine.exact() ? (!best || r.value < *best) : (!best || r.approx < best_approx);
    if (better) {
      best = inst.engine.exact() ? r.value : Rational(static_cast<double>(r.approx));
      best_approx = r.approx;
      res.n_prefix = mu.support().vec();
    }
  }
  if (best && (inst.engine.exact() ? *best <= eps : best_approx <= eps_l)) {
    res.found_ii = true;
    res.value = *best;
  } else {
    res.n_prefix.clear();
  }
  if (res.found_i)
    res.outcome = DichotomyResult::Outcome::certificate_i;
  else if (res.found_ii)
    res.outcome = DichotomyResult::Outcome::certificate_ii;
  return res;
}

}  // namespace schreier
