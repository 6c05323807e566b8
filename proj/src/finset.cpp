#include "schreier/finset.hpp"

#include <algorithm>
#include <iterator>

#include "schreier/error.hpp"

namespace schreier {

FinSet::FinSet(std::initializer_list<Nat> elems) : FinSet(std::vector<Nat>(elems)) {}

FinSet::FinSet(std::vector<Nat> elems) : e_(std::move(elems)) {
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] == 0) throw DomainError("sets contain positive integers only");
    if (i > 0 && e_[i - 1] >= e_[i]) throw DomainError("set elements must be strictly increasing");
  }
}

FinSet FinSet::interval(Nat lo, Nat hi) {
  std::vector<Nat> v;
  for (Nat x = lo; x <= hi; ++x) v.push_back(x);
  return FinSet(std::move(v));
}

FinSet FinSet::from_mask(std::uint64_t mask) {
  std::vector<Nat> v;
  for (Nat i = 0; i < 64; ++i)
    if (mask >> i & 1u) v.push_back(i + 1);
  FinSet s;
  s.e_ = std::move(v);
  return s;
}

Nat FinSet::min() const {
  if (e_.empty()) throw DomainError("min of the empty set");
  return e_.front();
}

Nat FinSet::max() const {
  if (e_.empty()) throw DomainError("max of the empty set");
  return e_.back();
}

bool FinSet::contains(Nat x) const { return std::binary_search(e_.begin(), e_.end(), x); }

bool FinSet::subset_of(const FinSet& other) const {
  return std::includes(other.e_.begin(), other.e_.end(), e_.begin(), e_.end());
}

FinSet FinSet::with(Nat x) const {
  if (!e_.empty() && x <= e_.back()) throw DomainError("appended element must exceed the maximum");
  if (x == 0) throw DomainError("sets contain positive integers only");
  FinSet s = *this;
  s.e_.push_back(x);
  return s;
}

FinSet FinSet::without(Nat x) const {
  FinSet s;
  std::copy_if(e_.begin(), e_.end(), std::back_inserter(s.e_), [x](Nat y) { return y != x; });
  return s;
}

FinSet FinSet::unite(const FinSet& other) const {
  FinSet s;
  std::set_union(e_.begin(), e_.end(), other.e_.begin(), other.e_.end(), std::back_inserter(s.e_));
  return s;
}

std::string FinSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(e_[i]);
  }
  return out + "}";
}

bool colex_less(const FinSet& a, const FinSet& b) {
  auto ia = a.vec().rbegin(), ib = b.vec().rbegin();
  for (; ia != a.vec().rend() && ib != b.vec().rend(); ++ia, ++ib)
    if (*ia != *ib) return *ia < *ib;
  return ia == a.vec().rend() && ib != b.vec().rend();
}

}  // namespace schreier
