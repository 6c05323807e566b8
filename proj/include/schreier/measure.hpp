#pragma once

#include <utility>
#include <vector>

#include "schreier/finset.hpp"
#include "schreier/rational.hpp"

namespace schreier {

// Finitely supported measure on N with exact positive weights.
class Measure {
 public:
  using Entry = std::pair<Nat, Rational>;

  Measure() = default;
  // Entries may come in any order; repeated points are merged, zero weights dropped.
  explicit Measure(std::vector<Entry> weights);
  static Measure dirac(Nat x);

  const std::vector<Entry>& weights() const noexcept { return w_; }
  bool empty() const noexcept { return w_.empty(); }
  Rational mass() const;
  Rational operator()(Nat x) const;
  Rational of(const FinSet& e) const;
  FinSet support() const;
  Nat min_support() const;

  Measure scaled(const Rational& c) const;
  friend Measure operator+(const Measure& a, const Measure& b);
  friend bool operator==(const Measure& a, const Measure& b) { return a.w_ == b.w_; }

 private:
  std::vector<Entry> w_;
};

}  // namespace schreier
