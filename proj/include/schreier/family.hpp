#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "schreier/finset.hpp"
#include "schreier/lazy_set.hpp"
#include "schreier/ordinal.hpp"

namespace schreier {

// Canonical automaton state. Two sets reaching equal states have equal
// residual families { G : E u G in F, G > E }.
using State = std::vector<std::uint64_t>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::size_t h = s.size();
    for (auto v : s) h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// A family of finite subsets of N. Grammar families are recognised by a
// deterministic automaton reading a set in increasing order; for hereditary
// families, E is a member iff no push along E is rejected.
class Family {
 public:
  enum class Kind { empty, singleton_empty, adm, schreier, compose, image, preimage, unite, explicit_list };

  static Family empty();
  static Family singleton_empty();
  static Family adm(std::uint64_t n);
  static Family schreier(const Ordinal& xi);
  // F[G]: unions of successive G-sets whose minima form an F-set.
  static Family compose(const Family& outer, const Family& inner);
  // { M(E) : E in F }
  static Family image(const Family& family, const LazySet& set);
  // { E : M(E) in F }
  static Family preimage(const Family& family, const LazySet& set);
  static Family unite(const Family& a, const Family& b);
  // Exactly the listed sets; need not be hereditary.
  static Family explicit_sets(std::vector<FinSet> sets);

  Kind kind() const;
  std::optional<State> start() const;
  std::optional<State> push(const State& state, Nat x) const;
  bool contains(const FinSet& e) const;
  // True when membership is decided by the automaton alone.
  bool automaton_exact() const { return kind() != Kind::explicit_list; }

  std::string describe() const;

  std::uint64_t adm_size() const;
  const Ordinal& schreier_index() const;
  const Family& outer() const;
  const Family& inner() const;
  const LazySet& set() const;
  const std::vector<FinSet>& sets() const;

  struct Node;

 private:
  explicit Family(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace schreier
