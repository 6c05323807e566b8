#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schreier/finset.hpp"
#include "schreier/lazy_set.hpp"
#include "schreier/norm.hpp"
#include "schreier/ordinal.hpp"

namespace schreier {

// A finite prefix x_1, ..., x_N of a sequence in the space normed by engine.
struct Instance {
  NormEngine engine;
  std::vector<SparseVector> vectors;

  std::size_t size() const { return vectors.size(); }
  const SparseVector& at(std::size_t i) const;  // 1-based
  // x_i = e_i for i <= n
  static Instance basis(const NormEngine& engine, std::size_t n);
};

struct ConvexMin {
  bool exact = true;
  Rational value;              // exact mode
  long double approx = 0;      // both modes
  long double gap_bound = 0;   // approximate mode: true minimum lies in [approx - gap, approx]
  std::vector<Rational> coefficients;  // one per element of F, summing to 1
  std::size_t cuts = 0;
};

// min |sum_{n in F} a_n s_n x_n| over the simplex. Exact engines use cutting
// planes on norming functionals; the Z engine falls back to a grid.
ConvexMin min_convex(const Instance& inst, const FinSet& f, std::span<const int> signs = {},
                     bool lexicographic = true);

enum class Variant { plain, a, sigma };
std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

bool f_membership(const Instance& inst, const FinSet& f, const Rational& eps, Variant variant);

struct SetMargin {
  FinSet set;
  std::vector<int> signs;  // worst sign pattern for this set
  Rational margin;
  long double margin_approx = 0;
};

struct CertReport {
  std::string family;
  std::string variant = "sigma";
  Rational epsilon;
  bool passed = true;
  bool exact = true;
  std::size_t sets_checked = 0;
  FinSet worst_set;
  std::vector<int> worst_signs;
  Rational worst_margin;  // min-convex value minus epsilon
  long double worst_margin_approx = 0;
  std::vector<Rational> argmin;
  std::optional<FinSet> first_failure;  // colex-first failing set
  std::vector<SetMargin> margins;       // one row per maximal set checked
};

// Checks S(xi) restricted to [N] lies in the sigma family F^sigma_eps.
CertReport spreading_certificate(const Instance& inst, const Ordinal& xi, const Rational& eps, Nat n,
                                 Nat bound = 24);

struct NullRow {
  std::string sample;
  std::size_t n = 0;
  Rational value;
  long double approx = 0;
  Rational delta;
  bool ok = true;
};

struct NullReport {
  bool passed = true;
  std::size_t samples = 0;
  std::vector<NullRow> rows;
  std::optional<NullRow> first_failure;
};

struct NullTestOptions {
  std::size_t depth = 3;          // n = 1..depth
  std::size_t head_length = 3;    // subsets of the first elements of M are sampled as heads
  std::size_t max_samples = 16;   // including M itself
  std::vector<Rational> deltas;   // default 1/n
};

// Compares |sum_i S^xi_{N,n}(i) x_i| with delta_n, strictly, over sampled N in [M].
NullReport ravg_null_test(const Instance& inst, const Ordinal& xi, const LazySet& m, const NullTestOptions& opt = {});

struct DichotomyResult {
  enum class Outcome { certificate_i, certificate_ii, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  // alternative (i): prefix M with every S_xi(M)-set in F_{eps1}, eps1 > eps
  bool found_i = false;
  Rational eps1;
  std::vector<Nat> m_prefix;
  // alternative (ii): N whose first repeated average has norm <= eps
  bool found_ii = false;
  Rational value;
  std::vector<Nat> n_prefix;
  std::string note;
};
std::string outcome_name(DichotomyResult::Outcome o);

DichotomyResult dichotomy_search(const Instance& inst, const Ordinal& xi, const Rational& eps, std::size_t depth);

}  // namespace schreier
