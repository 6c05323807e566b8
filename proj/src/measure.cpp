#include "schreier/measure.hpp"

#include <algorithm>

#include "schreier/error.hpp"

namespace schreier {

Measure::Measure(std::vector<Entry> weights) {
  std::sort(weights.begin(), weights.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& [x, q] : weights) {
    if (x == 0) throw DomainError("measures live on positive integers");
    if (q < 0) throw DomainError("negative weight");
    if (!w_.empty() && w_.back().first == x)
      w_.back().second += q;
    else
      w_.emplace_back(x, std::move(q));
  }
  std::erase_if(w_, [](const Entry& e) { return e.second == 0; });
}

Measure Measure::dirac(Nat x) { return Measure({{x, Rational(1)}}); }

Rational Measure::mass() const {
  Rational s = 0;
  for (const auto& e : w_) s += e.second;
  return s;
}

Rational Measure::operator()(Nat x) const {
  auto it = std::lower_bound(w_.begin(), w_.end(), x, [](const Entry& e, Nat v) { return e.first < v; });
  if (it == w_.end() || it->first != x) return 0;
  return it->second;
}

Rational Measure::of(const FinSet& e) const {
  Rational s = 0;
  for (Nat x : e) s += (*this)(x);
  return s;
}

FinSet Measure::support() const {
  std::vector<Nat> v;
  v.reserve(w_.size());
  for (const auto& e : w_) v.push_back(e.first);
  return FinSet(std::move(v));
}

Nat Measure::min_support() const {
  if (w_.empty()) throw DomainError("empty measure has no support");
  return w_.front().first;
}

Measure Measure::scaled(const Rational& c) const {
  Measure m;
  if (c == 0) return m;
  m.w_ = w_;
  for (auto& e : m.w_) e.second *= c;
  return m;
}

Measure operator+(const Measure& a, const Measure& b) {
  std::vector<Measure::Entry> all = a.w_;
  all.insert(all.end(), b.w_.begin(), b.w_.end());
  return Measure(std::move(all));
}

}  // namespace schreier
