#include "schreier/vector.hpp"

#include <algorithm>

#include "schreier/error.hpp"

namespace schreier {

SparseVector::SparseVector(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size();) {
    if (entries[i].first == 0) throw DomainError("vector coordinates are positive");
    Rational sum = 0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].first == entries[i].first; ++j) sum += entries[j].second;
    if (sum != 0) e_.emplace_back(entries[i].first, std::move(sum));
    i = j;
  }
}

SparseVector SparseVector::basis(Nat k, const Rational& a) { return SparseVector({{k, a}}); }

Rational SparseVector::operator[](Nat k) const {
  auto it = std::lower_bound(e_.begin(), e_.end(), k, [](const Entry& e, Nat v) { return e.first < v; });
  return it != e_.end() && it->first == k ? it->second : Rational(0);
}

FinSet SparseVector::support() const {
  std::vector<Nat> s;
  for (const auto& [k, a] : e_) s.push_back(k);
  return FinSet(std::move(s));
}

Nat SparseVector::min_index() const {
  if (e_.empty()) throw DomainError("zero vector has no support");
  return e_.front().first;
}

Nat SparseVector::max_index() const {
  if (e_.empty()) throw DomainError("zero vector has no support");
  return e_.back().first;
}

SparseVector SparseVector::interval(Nat lo, Nat hi) const {
  SparseVector r;
  for (const auto& en : e_)
    if (en.first >= lo && en.first <= hi) r.e_.push_back(en);
  return r;
}

SparseVector SparseVector::restrict_to(const FinSet& coords) const {
  SparseVector r;
  for (const auto& en : e_)
    if (coords.contains(en.first)) r.e_.push_back(en);
  return r;
}

Rational SparseVector::dot(const SparseVector& other) const {
  Rational s = 0;
  auto i = e_.begin();
  auto j = other.e_.begin();
  while (i != e_.end() && j != other.e_.end()) {
    if (i->first < j->first)
      ++i;
    else if (j->first < i->first)
      ++j;
    else {
      s += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return s;
}

Rational SparseVector::l1() const {
  Rational s = 0;
  for (const auto& en : e_) s += abs(en.second);
  return s;
}

Rational SparseVector::sup() const {
  Rational s = 0;
  for (const auto& en : e_) s = std::max(s, Rational(abs(en.second)));
  return s;
}

SparseVector SparseVector::operator-() const {
  SparseVector r = *this;
  for (auto& en : r.e_) en.second = -en.second;
  return r;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
  SparseVector r;
  auto i = a.e_.begin();
  auto j = b.e_.begin();
  while (i != a.e_.end() || j != b.e_.end()) {
    if (j == b.e_.end() || (i != a.e_.end() && i->first < j->first)) {
      r.e_.push_back(*i++);
    } else if (i == a.e_.end() || j->first < i->first) {
      r.e_.push_back(*j++);
    } else {
      Rational s = i->second + j->second;
      if (s != 0) r.e_.emplace_back(i->first, std::move(s));
      ++i;
      ++j;
    }
  }
  return r;
}

SparseVector operator*(const Rational& s, const SparseVector& v) {
  SparseVector r;
  if (s == 0) return r;
  r.e_ = v.e_;
  for (auto& en : r.e_) en.second *= s;
  return r;
}

bool operator==(const SparseVector& a, const SparseVector& b) { return a.e_ == b.e_; }

std::string SparseVector::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(e_[i].first) + ":" + to_string(e_[i].second);
  }
  return s + "]";
}

}  // namespace schreier
