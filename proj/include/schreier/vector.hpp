#pragma once

#include <string>
#include <utility>
#include <vector>

#include "schreier/finset.hpp"
#include "schreier/rational.hpp"

namespace schreier {

// Finitely supported rational vector, entries sorted by coordinate, zeros omitted.
class SparseVector {
 public:
  using Entry = std::pair<Nat, Rational>;

  SparseVector() = default;
  // Repeated coordinates are summed.
  explicit SparseVector(std::vector<Entry> entries);
  static SparseVector basis(Nat k, const Rational& a = 1);

  const std::vector<Entry>& entries() const noexcept { return e_; }
  std::size_t size() const noexcept { return e_.size(); }
  bool is_zero() const noexcept { return e_.empty(); }
  Rational operator[](Nat k) const;
  FinSet support() const;
  Nat min_index() const;
  Nat max_index() const;

  // Coordinates in [lo, hi].
  SparseVector interval(Nat lo, Nat hi) const;
  SparseVector restrict_to(const FinSet& coords) const;
  Rational dot(const SparseVector& other) const;
  Rational l1() const;
  Rational sup() const;

  SparseVector operator-() const;
  friend SparseVector operator+(const SparseVector& a, const SparseVector& b);
  friend SparseVector operator-(const SparseVector& a, const SparseVector& b) { return a + (-b); }
  friend SparseVector operator*(const Rational& s, const SparseVector& v);
  friend bool operator==(const SparseVector&, const SparseVector&);

  std::string str() const;

 private:
  std::vector<Entry> e_;
};

}  // namespace schreier
