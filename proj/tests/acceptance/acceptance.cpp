#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "schreier/ravg.hpp"

using namespace schreier;
using namespace oracle;

namespace {

Ordinal P(const char* s) { return Ordinal::parse(s); }
Rational Q(const char* s) { return parse_rational(s); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

SparseVector random_vector(std::mt19937_64& rng, Nat max_coord, std::size_t min_support, std::size_t max_support) {
  std::uniform_int_distribution<Nat> coord(1, max_coord);
  std::uniform_int_distribution<std::size_t> count(min_support, max_support);
  std::vector<SparseVector::Entry> e;
  std::size_t k = count(rng);
  for (std::size_t i = 0; i < k; ++i) e.emplace_back(coord(rng), random_rational(rng));
  return SparseVector(std::move(e));
}

std::vector<LazySet> sampled_sets() {
  std::mt19937_64 rng(2024);
  std::vector<LazySet> out{LazySet::naturals()};
  std::uniform_int_distribution<Nat> start(1, 9), step(1, 5), ratio(2, 4);
  while (out.size() < 20) {
    switch (out.size() % 3) {
      case 0:
        out.push_back(LazySet::arithmetic(start(rng), step(rng)));
        break;
      case 1:
        out.push_back(LazySet::geometric(start(rng), ratio(rng)));
        break;
      default: {
        std::vector<Nat> head;
        Nat v = 0;
        for (int i = 0; i < 4; ++i) head.push_back(v += step(rng));
        out.push_back(LazySet::with_prefix(head, step(rng)));
      }
    }
  }
  return out;
}

std::string summarize(const ValidationReport& rep) {
  std::ostringstream s;
  s << rep.checked << " cells checked, " << rep.violations.size() << " violations, " << rep.unresolved.size()
    << " samples unresolved";
  if (!rep.violations.empty()) {
    const BlockIssue& first = rep.violations[0];
    s << "; first: " << first.sample << " r=" << first.r << " " << first.detail;
  }
  return s.str();
}

// 1 -----------------------------------------------------------------------

Verdict criterion_1() {
  Verdict v;
  const auto sets = sampled_sets();
  std::vector<std::pair<LazySet, std::size_t>> samples;
  for (const auto& m : sets) samples.emplace_back(m, 5);
  for (const char* xi : {"0", "1", "2", "3", "w", "w+1", "w^2"}) {
    ValidationReport rep = block_validate(ProbBlock::repeated_averages(P(xi)), samples);
    v.pass = v.pass && rep.passed();
    v.detail += std::string(v.detail.empty() ? "" : "; ") + "xi=" + xi + ": " + summarize(rep);
  }
  return v;
}

// 2 -----------------------------------------------------------------------

Verdict criterion_2() {
  Verdict v;
  const auto sets = sampled_sets();
  std::vector<std::pair<LazySet, std::size_t>> samples;
  for (const auto& m : sets) samples.emplace_back(m, 5);
  for (const char* zeta : {"0", "1", "2"})
    for (const char* xi : {"0", "1", "2"}) {
      ProbBlock c = convolve(ProbBlock::repeated_averages(P(zeta)), ProbBlock::repeated_averages(P(xi)));
      ValidationReport rep = block_validate(c, samples);
      v.pass = v.pass && rep.passed();
      v.detail += std::string(v.detail.empty() ? "" : "; ") + "(" + zeta + "," + xi + "): " + summarize(rep);
    }
  // S_0 * S_xi = S_xi wherever both sides are computable
  std::size_t compared = 0, mismatched = 0;
  for (const char* xi : {"0", "1", "2"}) {
    ProbBlock b = ProbBlock::repeated_averages(P(xi));
    ProbBlock c = convolve(ProbBlock::repeated_averages(P("0")), b);
    for (const auto& m : sets)
      for (std::size_t n = 1; n <= 5; ++n) {
        try {
          Measure expect = b.measure(m, n);
          ++compared;
          if (!(c.measure(m, n) == expect)) ++mismatched;
        } catch (const BoundError&) {
          break;
        }
      }
  }
  v.pass = v.pass && mismatched == 0;
  v.detail += "; identity S_0*S_xi = S_xi: " + std::to_string(compared - mismatched) + "/" + std::to_string(compared);
  return v;
}

// 3 -----------------------------------------------------------------------

Verdict criterion_3() {
  Verdict v;
  for (const char* xi : {"1", "2"})
    for (const char* eps : {"1/2", "1"}) {
      FastGrowReport rep = fastgrow_check(P(xi), LazySet::naturals(), LazySet::geometric(4, 4), Q(eps), 60);
      v.pass = v.pass && rep.passed();
      v.detail += std::string(v.detail.empty() ? "" : "; ") + "xi=" + xi + " eps=" + eps + ": growth " +
                  (rep.condition_holds ? "holds" : "fails at n=" + std::to_string(rep.first_violation.value_or(0))) +
                  ", max sum " + to_string(rep.max_sum) + (rep.bound_holds ? " <= " : " > ") + to_string(rep.bound);
    }
  return v;
}

// 4 -----------------------------------------------------------------------

Verdict criterion_4() {
  Verdict v;
  std::size_t pairs = 0;
  for (std::uint64_t m = 1; m <= 12; ++m)
    for (std::uint64_t n = 1; m * n <= 12; ++n) {
      Family f = Family::compose(Family::adm(m), Family::adm(n));
      std::uint64_t rank = cb_probe_rank(FinSet(), f, m * n);
      CbIndex cb = cb_symbolic(f);
      ++pairs;
      if (rank != m * n || !cb.exact || cb.value != Ordinal::natural(rank + 1)) {
        v.pass = false;
        v.detail += "A(" + std::to_string(m) + ")[A(" + std::to_string(n) + ")]: rank " + std::to_string(rank) +
                    ", cb " + cb.value.str() + "; ";
      }
    }
  Family s1 = Family::schreier(P("1"));
  for (Nat n = 1; n <= 30; ++n) {
    std::uint64_t rank = cb_probe_rank(FinSet{n}, s1, 3 * n);
    if (rank != n - 1) {
      v.pass = false;
      v.detail += "S_1 at {" + std::to_string(n) + "}: rank " + std::to_string(rank) + "; ";
    }
  }
  v.detail += std::to_string(pairs) + " products and 30 singletons checked";
  return v;
}

// 5 -----------------------------------------------------------------------

Verdict criterion_5() {
  Verdict v;
  std::mt19937_64 rng(5);
  Family f = Family::schreier(P("1"));
  NormEngine e = NormEngine::schreier(P("1"));
  std::size_t bad = 0;
  for (int i = 0; i < 500; ++i) {
    SparseVector x = random_vector(rng, 20, 0, 10);
    if (e.exact_norm(x) != schreier_oracle(f, x)) ++bad;
  }
  std::size_t trees = 0, tree_bad = 0;
  for (std::size_t size = 1; size <= 8; ++size) {
    std::vector<std::vector<NodePath>> all;
    forests({}, size, 1, all);
    for (const auto& nodes : all) {
      Tree t = Tree::from_nodes(nodes);
      NormEngine j = NormEngine::tree(t);
      TreeOracle o(t);
      ++trees;
      for (int i = 0; i < 100; ++i) {
        SparseVector x = random_vector(rng, size, 0, size);
        if (j.exact_norm(x) != o.eval(x)) ++tree_bad;
      }
    }
  }
  v.pass = bad == 0 && tree_bad == 0;
  v.detail = "schreier(1): " + std::to_string(500 - bad) + "/500 agree; tree: " + std::to_string(trees) +
             " forests, " + std::to_string(trees * 100 - tree_bad) + "/" + std::to_string(trees * 100) + " agree";
  return v;
}

// 6 -----------------------------------------------------------------------

Verdict criterion_6() {
  Verdict v;
  std::mt19937_64 rng(6);
  std::size_t total = 0, bad = 0;
  for (const auto& base : {NormEngine::ell1(), NormEngine::sup(), NormEngine::schreier(P("1"))}) {
    NormEngine ex = NormEngine::ex(base, Partition::dyadic());
    for (int t = 0; t < 100; ++t) {
      // n_1 < n_2 < ... with n_i in N_i; x_i is the i-th unit vector of the base
      std::uniform_int_distribution<Nat> len(1, 6);
      std::vector<SparseVector::Entry> diag, image;
      Nat prev = 0;
      for (Nat cls = 1, k = len(rng); cls <= k; ++cls) {
        LazySet n = ex.partition().member(cls);
        std::size_t j = 1;
        while (n.at(j) <= prev) ++j;
        j += std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        prev = n.at(j);
        Rational a = random_rational(rng);
        diag.emplace_back(prev, a);
        image.emplace_back(cls, a);
      }
      ++total;
      if (ex.exact_norm(SparseVector(diag)) != base.exact_norm(SparseVector(image))) ++bad;
    }
  }
  v.pass = bad == 0;
  v.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " diagonal vectors isometric";
  return v;
}

// 7 -----------------------------------------------------------------------

SparseVector normalized(const NormEngine& z, const SparseVector& x) {
  // rational rounding of x / |x|; the residue is far below the 1e-9 check
  const long double nx = z.approx_norm(x);
  std::vector<SparseVector::Entry> e;
  for (const auto& [k, a] : x.entries()) {
    Rational q(static_cast<double>(to_long_double(a) / nx));
    e.emplace_back(k, q);
  }
  return SparseVector(std::move(e));
}

Verdict criterion_7() {
  Verdict v;
  const long double tol = 1e-12L;
  long double worst_basis = 0;
  for (const char* xi : {"1", "2"}) {
    NormEngine z = NormEngine::z(P(xi), NormEngine::sup(), Q("1/2"));
    for (Nat k = 1; k <= 20; ++k) worst_basis = std::max(worst_basis, std::fabs(z.approx_norm(SparseVector::basis(k)) - 1));
  }
  bool basis_ok = worst_basis <= tol;

  std::mt19937_64 rng(7);
  bool iter_ok = true;
  long double worst_ratio = 0;
  std::size_t lifted = 0, iterated = 0;
  for (const char* xi : {"1", "2"}) {
    NormEngine z = NormEngine::z(P(xi), NormEngine::sup(), Q("1/2"));
    const long double lip = to_long_double(z.vartheta()) / std::sqrt(3.0L);
    for (int i = 0; i < 100; ++i) {
      // flat vectors push the square-function term above the base norm
      SparseVector x = random_vector(rng, 14, 1, 8);
      if (i % 2) {
        std::vector<SparseVector::Entry> e;
        for (const auto& [k, a] : x.entries()) e.emplace_back(k, Rational(sign(a) < 0 ? -1 : 1));
        x = SparseVector(std::move(e));
      }
      NormResult r = z.norm(x);
      if (r.trace.size() >= 2 && r.trace[1] > r.trace[0]) ++lifted;
      if (r.trace.size() >= 3 && r.trace[2] > r.trace[1]) ++iterated;
      for (std::size_t k = 1; k < r.trace.size(); ++k) iter_ok = iter_ok && r.trace[k] >= r.trace[k - 1];
      for (std::size_t k = 2; k < r.trace.size(); ++k) {
        long double prev = r.trace[k - 1] - r.trace[k - 2], step = r.trace[k] - r.trace[k - 1];
        if (prev > 1e-15L) worst_ratio = std::max(worst_ratio, step / prev);
        iter_ok = iter_ok && step <= (lip + 1e-6L) * prev + 1e-18L;
      }
    }
  }

  long double worst_margin = INFINITY;
  std::size_t pairs = 0;
  while (pairs < 100) {
    const char* xi = pairs % 2 ? "2" : "1";
    NormEngine z = NormEngine::z(P(xi), NormEngine::sup(), Q("1/2"));
    std::size_t n = 1 + rng() % 3;
    Family level = Family::schreier(z.z_level(n));
    std::size_t count = 2 + rng() % 3;
    std::vector<SparseVector> blocks;
    Nat next = 1 + rng() % 4;
    for (std::size_t b = 0; b < count; ++b) {
      std::size_t width = 1 + rng() % 3;
      std::vector<SparseVector::Entry> e{{next, Rational(1 + static_cast<int>(rng() % 3))}};
      for (std::size_t w = 1; w < width; ++w)
        if (rng() % 2) e.emplace_back(next + w, random_rational(rng));
      SparseVector x(std::move(e));
      blocks.push_back(normalized(z, x));
      next = x.max_index() + 1 + rng() % 3;
    }
    std::vector<Nat> minima;
    for (const auto& b : blocks) minima.push_back(b.min_index());
    FinSet f;
    for (Nat i = 1; i <= count; ++i)
      if (rng() % 4) f = f.with(i);
    if (f.empty()) continue;
    std::vector<Nat> fm;
    for (Nat i : f) fm.push_back(minima[i - 1]);
    if (!level.contains(FinSet(fm))) continue;
    std::vector<Rational> coeffs;
    for (std::size_t j = 0; j < f.size(); ++j) {
      Rational a = random_rational(rng);
      coeffs.push_back(a == 0 ? Rational(1) : a);
    }
    worst_margin = std::min(worst_margin, lower_l1_margin(z, blocks, n, f, coeffs));
    ++pairs;
  }
  bool margin_ok = worst_margin >= -1e-9L;

  v.pass = basis_ok && iter_ok && margin_ok;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "basis error %.3Le; %zu of 200 traces leave the base norm, %zu take a second step, "
                "step ratio max %.6Lf (limit %.6Lf); worst lower l1 margin %.6Le over %zu block sets",
                worst_basis, lifted, iterated, worst_ratio, 0.5L / std::sqrt(3.0L) + 1e-6L, worst_margin, pairs);
  v.detail = buf;
  return v;
}

// 8 -----------------------------------------------------------------------

Verdict criterion_8() {
  Verdict v;
  CertReport x1 = spreading_certificate(Instance::basis(NormEngine::schreier(P("1")), 12), P("1"), Q("1"), 12);
  CertReport c0 = spreading_certificate(Instance::basis(NormEngine::sup(), 12), P("1"), Q("1"), 12);
  bool spread_ok = x1.passed && x1.worst_margin >= 0 && !c0.passed && c0.first_failure.has_value();
  v.detail = "X_1: " + std::string(x1.passed ? "pass" : "fail") + " margin " + to_string(x1.worst_margin) +
             "; sup: " + (c0.passed ? "pass" : "fail") +
             (c0.first_failure ? " witness " + c0.first_failure->str() : std::string(" without witness"));

  std::mt19937_64 rng(8);
  std::vector<NormEngine> listed{NormEngine::ell1(), NormEngine::sup(), NormEngine::schreier(P("1")),
                                 NormEngine::schreier(P("2"))};
  std::vector<NormEngine> others{NormEngine::schreier(P("w")), NormEngine::mixed({P("0"), P("1"), P("2")}),
                                 NormEngine::ex(NormEngine::schreier(P("1")), Partition::dyadic()),
                                 NormEngine::tree(Tree::from_nodes({{1}, {1, 1}, {1, 2}, {2}, {2, 1}, {3}}))};
  std::size_t instances = 0, bad = 0;
  for (int round = 0; round < 2; ++round)
    for (const auto& e : round == 0 ? listed : others)
      for (int t = 0; t < 80; ++t) {
        Instance inst{e, {}};
        for (int i = 0; i < 4; ++i) inst.vectors.push_back(random_vector(rng, 6, 1, 6));
        FinSet f = FinSet::from_mask(std::uniform_int_distribution<std::uint64_t>(1, 15)(rng));
        std::vector<int> s;
        for (std::size_t j = 0; j < f.size(); ++j) s.push_back(rng() % 2 ? 1 : -1);
        ConvexMin c = min_convex(inst, f, s);
        ++instances;
        bool ok = c.exact && e.exact_norm(combine(inst, f, s, c.coefficients)) == c.value &&
                  c.value <= grid_oracle(inst, f, s);
        for (std::size_t j = 0; j < f.size(); ++j) {
          std::vector<Rational> vertex(f.size(), 0);
          vertex[j] = 1;
          ok = ok && c.value <= e.exact_norm(combine(inst, f, s, vertex));
        }
        if (round == 0) ok = ok && c.value == lp_oracle(inst, f, s, 6);
        if (!ok) ++bad;
      }
  v.pass = spread_ok && bad == 0;
  v.detail += "; min_convex: " + std::to_string(instances - bad) + "/" + std::to_string(instances) + " instances agree";
  return v;
}

// 9 -----------------------------------------------------------------------

Verdict criterion_9() {
  Verdict v;
  LazySet m = LazySet::arithmetic(2, 1);
  NullReport c0 = ravg_null_test(Instance::basis(NormEngine::sup(), 200), P("1"), m);
  NullReport x1 = ravg_null_test(Instance::basis(NormEngine::schreier(P("1")), 200), P("1"), m);
  v.pass = c0.passed && !x1.passed && x1.first_failure && x1.first_failure->n == 1;
  v.detail = "sup basis: " + std::string(c0.passed ? "pass" : "fail") + " over " + std::to_string(c0.samples) +
             " samples; X_1 basis: " + (x1.passed ? "pass" : "fail") +
             (x1.first_failure ? " at n=" + std::to_string(x1.first_failure->n) + " value " + to_string(x1.first_failure->value)
                               : std::string());
  return v;
}

struct Criterion {
  const char* title;
  double seconds;  // runtime limit, 0 when none is pinned
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"probability-block axioms for repeated averages", 10, criterion_1},
      {"convolution blocks and the S_0 identity", 10, criterion_2},
      {"fast-growing bound at desk scale", 60, criterion_3},
      {"Cantor-Bendixson consistency", 30, criterion_4},
      {"norm oracles (Schreier and tree)", 60, criterion_5},
      {"E_X diagonal isometry", 0, criterion_6},
      {"Z norm basis, iteration and lower l1 estimate", 0, criterion_7},
      {"spreading certificates and convex minimisation", 120, criterion_8},
      {"repeated-average null test separates c0 from X_1", 0, criterion_9},
  };
  return all;
}

bool report(std::size_t k) {
  const Criterion& c = criteria()[k - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = c.run();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = c.seconds == 0 || secs < c.seconds;
  if (!in_time) v.detail += "; runtime limit " + std::to_string(static_cast<int>(c.seconds)) + " s exceeded";
  const bool pass = v.pass && in_time;
  std::printf("criterion %zu: %s  %s (%.2f s) -- %s\n", k, pass ? "PASS" : "FAIL", c.title, secs, v.detail.c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::size_t only = 0;
  app.add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(std::size_t{1}, criteria().size()));
  CLI11_PARSE(app, argc, argv);
  bool all = true;
  for (std::size_t k = 1; k <= criteria().size(); ++k)
    if (only == 0 || only == k) all = report(k) && all;
  return all ? 0 : 1;
}
