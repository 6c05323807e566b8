#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schreier/finset.hpp"
#include "schreier/lazy_set.hpp"
#include "schreier/ordinal.hpp"
#include "schreier/rational.hpp"
#include "schreier/tree.hpp"
#include "schreier/vector.hpp"

namespace schreier {

// Pairwise disjoint infinite sets N_1, N_2, ... used by the E_X construction.
class Partition {
 public:
  // N_i = { n : the 2-adic valuation of n is i - 1 }, covering all of N.
  static Partition dyadic();
  // Finitely many classes; they must be pairwise disjoint.
  static Partition classes(std::vector<LazySet> sets);

  std::optional<std::size_t> class_of(Nat n) const;
  LazySet member(std::size_t i) const;  // 1-based
  std::optional<std::size_t> class_count() const;  // nullopt when infinite
  std::string describe() const;

 private:
  std::vector<LazySet> sets_;
  bool dyadic_ = false;
};

// Norming functional for x: functional.dot(x) equals the norm and
// |functional.dot(y)| <= |y| for every y, so it also serves as a cutting plane.
struct DualCert {
  SparseVector functional;
  std::vector<FinSet> witness;  // admissible set, interval endpoints, antichain, ...
  std::string description;
};

struct NormResult {
  bool exact = true;
  Rational value;               // exact kinds only
  long double approx = 0;       // always set
  long double error_bound = 0;  // zero for exact kinds
  DualCert certificate;         // exact kinds only
  std::vector<long double> trace;  // fixed-point iterates of the z kind
  std::size_t levels = 0;          // z kind: terms of the l2 sum evaluated
};

inline constexpr long double kDefaultZTolerance = 1e-12L;

class NormEngine {
 public:
  enum class Kind { ell1, sup, schreier, mixed, ex, z, tree };

  static NormEngine ell1();
  static NormEngine sup();
  static NormEngine schreier(const Ordinal& gamma);
  // sum_n 2^-n |x|_{X_{gamma_n}}; the last term takes the remaining weight so
  // that the weights add up to 1.
  static NormEngine mixed(std::vector<Ordinal> gammas);
  static NormEngine ex(const NormEngine& base, Partition partition);
  static NormEngine z(const Ordinal& xi, const NormEngine& base, const Rational& vartheta,
                      long double tolerance = kDefaultZTolerance);
  static NormEngine tree(Tree t);

  Kind kind() const;
  bool exact() const { return kind() != Kind::z; }
  NormResult norm(const SparseVector& x) const;
  // Exact value; throws for the z kind.
  Rational exact_norm(const SparseVector& x) const;
  long double approx_norm(const SparseVector& x) const { return norm(x).approx; }

  const Ordinal& ordinal() const;  // schreier gamma or z xi
  const std::vector<Ordinal>& gammas() const;
  const NormEngine& base() const;
  const Partition& partition() const;
  const Tree& tree_shape() const;
  const Rational& vartheta() const;
  long double tolerance() const;
  // Index xi_n of the z kind: the n-th term of the fundamental sequence of
  // omega^xi, plus one.
  Ordinal z_level(std::size_t n) const;

  std::string describe() const;

  struct Impl;

 private:
  explicit NormEngine(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// q: e_n -> e_i for n in N_i.
SparseVector ex_quotient_apply(const NormEngine& engine, const SparseVector& x);

// |sum_{i in F} a_i z_i| - vartheta_n sum |a_i| for successive normalized
// blocks z_i (1-based indices into blocks).
long double lower_l1_margin(const NormEngine& engine, std::span<const SparseVector> blocks, std::size_t n,
                            const FinSet& f, std::span<const Rational> coeffs);

}  // namespace schreier
