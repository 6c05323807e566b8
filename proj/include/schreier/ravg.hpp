#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schreier/family.hpp"
#include "schreier/measure.hpp"

namespace schreier {

struct AverageBlock {
  Measure measure;
  std::size_t first_index = 0;  // 1-based positions in M of the support
  std::size_t last_index = 0;
};

// S^xi_{M,n}: the n-th repeated average of M.
AverageBlock repeated_average(const Ordinal& xi, const LazySet& m, std::size_t n);
Measure ravg_measure(const Ordinal& xi, const LazySet& m, std::size_t n);

// S^xi_{M,1}, S^xi_{M,2}, ... restricted to points <= cutoff. Blocks that start
// beyond the cutoff are omitted; the last one returned may be cut short.
std::vector<Measure> repeated_averages_below(const Ordinal& xi, const LazySet& m, Nat cutoff);

// A family together with a rule (M, n) -> measure.
class ProbBlock {
 public:
  using Rule = std::function<Measure(const LazySet&, std::size_t)>;
  // successive calls yield P_{M,1}, P_{M,2}, ...
  using Stream = std::function<Measure()>;
  using StreamFactory = std::function<Stream(const LazySet&)>;
  // successive calls yield min supp P_{M,1}, min supp P_{M,2}, ...
  using MinimaStream = std::function<Nat()>;
  using MinimaFactory = std::function<MinimaStream(const LazySet&)>;

  // Without factories, streams call the rule once per index.
  ProbBlock(Family family, Rule rule, std::string name, StreamFactory stream = {}, MinimaFactory minima = {});
  static ProbBlock repeated_averages(const Ordinal& xi);

  const Family& family() const { return family_; }
  Measure measure(const LazySet& m, std::size_t n) const { return rule_(m, n); }
  Stream stream(const LazySet& m) const;
  MinimaStream minima(const LazySet& m) const;
  const std::string& name() const { return name_; }

 private:
  Family family_;
  Rule rule_;
  std::string name_;
  StreamFactory stream_;
  MinimaFactory minima_;
};

// Q * P over Q.family[P.family]:
//   O_{M,n} = sum over i in L^{-1}_{Q,n} of Q_{L,n}(l_i) P_{M,i},  l_i = min supp P_{M,i}.
ProbBlock convolve(const ProbBlock& q, const ProbBlock& p);

struct BlockIssue {
  std::string kind;  // "mass", "support", "shift" or "bound"
  std::string sample;
  std::size_t r = 0;
  std::string detail;
};

struct ValidationReport {
  std::size_t checked = 0;
  std::vector<BlockIssue> violations;
  // cells that could not be decided within the probe bound
  std::vector<BlockIssue> unresolved;
  bool passed() const { return violations.empty() && unresolved.empty(); }
};

ValidationReport block_validate(const ProbBlock& b, const std::vector<std::pair<LazySet, std::size_t>>& samples);

struct SufficiencyResult {
  Rational value;
  FinSet witness;
};

// max over E in G with E inside supp P_{N,1} of P_{N,1}(E).
SufficiencyResult sufficiency_sup(const ProbBlock& b, const Family& g, const LazySet& n, std::size_t bound = 4096);

struct FastGrowReport {
  bool condition_holds = true;
  std::size_t checked_terms = 0;
  std::optional<std::size_t> first_violation;
  Rational max_sum;
  FinSet argmax;
  Rational bound;  // 1 + eps
  bool bound_holds = true;
  bool passed() const { return condition_holds && bound_holds; }
};

// Checks k_{l_n}(1+2 eps) < l_{n+1} eps on the probed prefix of L, and computes
// max over E in [1..n_max] with (k_i)_{i in E} in S_xi of sum_i S^xi_{L,i}(E).
FastGrowReport fastgrow_check(const Ordinal& xi, const LazySet& k, const LazySet& l, const Rational& eps, Nat n_max);

}  // namespace schreier
