#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace schreier {

using Nat = std::uint64_t;

// Finite set of positive integers, stored strictly increasing.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::initializer_list<Nat> elems);
  explicit FinSet(std::vector<Nat> elems);

  static FinSet interval(Nat lo, Nat hi);
  static FinSet from_mask(std::uint64_t mask);

  std::span<const Nat> elements() const noexcept { return e_; }
  const std::vector<Nat>& vec() const noexcept { return e_; }
  std::size_t size() const noexcept { return e_.size(); }
  bool empty() const noexcept { return e_.empty(); }
  Nat min() const;
  Nat max() const;
  Nat operator[](std::size_t i) const { return e_[i]; }
  bool contains(Nat x) const;
  bool subset_of(const FinSet& other) const;

  // Appends x, which must exceed the current maximum.
  FinSet with(Nat x) const;
  FinSet without(Nat x) const;
  FinSet unite(const FinSet& other) const;

  auto begin() const noexcept { return e_.begin(); }
  auto end() const noexcept { return e_.end(); }

  std::string str() const;

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Nat> e_;
};

// Colex order: compare by the largest element of the symmetric difference.
bool colex_less(const FinSet& a, const FinSet& b);

}  // namespace schreier
