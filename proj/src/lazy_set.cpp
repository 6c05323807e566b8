#include "schreier/lazy_set.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <sstream>

#include "schreier/error.hpp"

namespace schreier {

struct LazySet::Impl {
  Generator generator;
  std::string description;
  std::size_t probe_limit;
  mutable std::mutex mutex;
  std::vector<Nat> cache;

  // caller holds the mutex
  void fill(std::size_t index) {
    if (index > probe_limit)
      throw BoundError("probe bound " + std::to_string(probe_limit) + " exhausted on " + description);
    while (cache.size() < index) {
      std::size_t i = cache.size() + 1;
      std::optional<Nat> v = generator(i);
      if (!v) throw BoundError("element " + std::to_string(i) + " of " + description + " exceeds 64-bit range");
      if (*v == 0) throw DomainError(description + " produced a non-positive element");
      if (!cache.empty() && *v <= cache.back())
        throw DomainError(description + " is not strictly increasing at index " + std::to_string(i));
      cache.push_back(*v);
    }
  }
};

LazySet::LazySet(Generator generator, std::string description, std::size_t probe_limit)
    : impl_(std::make_shared<Impl>()) {
  impl_->generator = std::move(generator);
  impl_->description = std::move(description);
  impl_->probe_limit = probe_limit;
}

namespace {

constexpr Nat kMax = std::numeric_limits<Nat>::max();

std::optional<Nat> checked_add(Nat a, Nat b) {
  if (a > kMax - b) return std::nullopt;
  return a + b;
}

std::optional<Nat> checked_mul(Nat a, Nat b) {
  if (a != 0 && b > kMax / a) return std::nullopt;
  return a * b;
}

}  // namespace

LazySet LazySet::naturals(std::size_t probe_limit) {
  return LazySet([](std::size_t i) -> std::optional<Nat> { return i; }, "naturals", probe_limit);
}

LazySet LazySet::arithmetic(Nat start, Nat step, std::size_t probe_limit) {
  if (start == 0 || step == 0) throw DomainError("arithmetic sequence needs positive start and step");
  return LazySet(
      [start, step](std::size_t i) -> std::optional<Nat> {
        auto offset = checked_mul(step, i - 1);
        return offset ? checked_add(start, *offset) : std::nullopt;
      },
      "arith:" + std::to_string(start) + ":" + std::to_string(step), probe_limit);
}

LazySet LazySet::geometric(Nat start, Nat ratio, std::size_t probe_limit) {
  if (start == 0 || ratio < 2) throw DomainError("geometric sequence needs start >= 1 and ratio >= 2");
  return LazySet(
      [start, ratio](std::size_t i) -> std::optional<Nat> {
        std::optional<Nat> v = start;
        for (std::size_t k = 1; k < i && v; ++k) v = checked_mul(*v, ratio);
        return v;
      },
      "geom:" + std::to_string(start) + ":" + std::to_string(ratio), probe_limit);
}

LazySet LazySet::with_prefix(std::vector<Nat> prefix, Nat tail_step, std::size_t probe_limit) {
  if (prefix.empty()) throw DomainError("list prefix must be non-empty");
  if (tail_step == 0) throw DomainError("tail step must be positive");
  std::string desc = "list:";
  for (std::size_t i = 0; i < prefix.size(); ++i) desc += (i ? "," : "") + std::to_string(prefix[i]);
  desc += ":" + std::to_string(tail_step);
  return LazySet(
      [prefix = std::move(prefix), tail_step](std::size_t i) -> std::optional<Nat> {
        if (i <= prefix.size()) return prefix[i - 1];
        auto offset = checked_mul(tail_step, i - prefix.size());
        return offset ? checked_add(prefix.back(), *offset) : std::nullopt;
      },
      desc, probe_limit);
}

LazySet LazySet::parse(const std::string& text, std::size_t probe_limit) {
  auto fields = [&] {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) out.push_back(part);
    return out;
  }();
  auto number = [&](const std::string& s) -> Nat {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ParseError("bad number '" + s + "' in set description '" + text + "'");
    return std::stoull(s);
  };
  if (fields.size() == 1 && (fields[0] == "naturals" || fields[0] == "N")) return naturals(probe_limit);
  if (fields.size() == 3 && fields[0] == "arith") return arithmetic(number(fields[1]), number(fields[2]), probe_limit);
  if (fields.size() == 3 && fields[0] == "geom") return geometric(number(fields[1]), number(fields[2]), probe_limit);
  if (fields.size() == 3 && fields[0] == "list") {
    std::vector<Nat> prefix;
    std::stringstream ss(fields[1]);
    std::string part;
    while (std::getline(ss, part, ',')) prefix.push_back(number(part));
    return with_prefix(std::move(prefix), number(fields[2]), probe_limit);
  }
  throw ParseError("unknown set description '" + text + "'");
}

Nat LazySet::at(std::size_t index) const {
  if (index == 0) throw DomainError("sequence indices are 1-based");
  std::lock_guard lock(impl_->mutex);
  if (index > impl_->cache.size()) impl_->fill(index);
  return impl_->cache[index - 1];
}

std::vector<Nat> LazySet::prefix(std::size_t count) const {
  std::lock_guard lock(impl_->mutex);
  impl_->fill(count);
  return {impl_->cache.begin(), impl_->cache.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::optional<std::size_t> LazySet::index_of(Nat value) const {
  std::lock_guard lock(impl_->mutex);
  auto& c = impl_->cache;
  while (c.empty() || c.back() < value) impl_->fill(c.size() + 1);
  auto it = std::lower_bound(c.begin(), c.end(), value);
  if (*it != value) return std::nullopt;
  return static_cast<std::size_t>(it - c.begin()) + 1;
}

LazySet LazySet::drop(std::size_t k) const {
  LazySet base = *this;
  return LazySet([base, k](std::size_t i) -> std::optional<Nat> { return base.at(i + k); },
                 description() + "[>" + std::to_string(k) + "]", probe_limit());
}

LazySet LazySet::minus(const FinSet& removed) const {
  LazySet base = *this;
  // position j of the result is the j-th element of base not in removed
  auto state = std::make_shared<std::pair<std::mutex, std::vector<std::size_t>>>();
  return LazySet(
      [base, removed, state](std::size_t i) -> std::optional<Nat> {
        std::lock_guard lock(state->first);
        auto& idx = state->second;
        std::size_t next = idx.empty() ? 1 : idx.back() + 1;
        while (idx.size() < i) {
          if (!removed.contains(base.at(next))) idx.push_back(next);
          ++next;
        }
        return base.at(idx[i - 1]);
      },
      description() + "\\" + removed.str(), probe_limit());
}

LazySet LazySet::splice(const FinSet& head, std::size_t tail_from) const {
  LazySet base = *this;
  if (!head.empty() && head.max() >= at(tail_from + 1))
    throw DomainError("spliced head must precede the retained tail");
  return LazySet(
      [base, head, tail_from](std::size_t i) -> std::optional<Nat> {
        if (i <= head.size()) return head[i - 1];
        return base.at(tail_from + (i - head.size()));
      },
      head.str() + "+" + description() + "[>" + std::to_string(tail_from) + "]", probe_limit());
}

LazySet LazySet::with_probe_limit(std::size_t probe_limit) const {
  LazySet base = *this;
  return LazySet([base](std::size_t i) -> std::optional<Nat> { return base.at(i); }, description(), probe_limit);
}

std::size_t LazySet::consumed() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->cache.size();
}

std::size_t LazySet::probe_limit() const { return impl_->probe_limit; }

const std::string& LazySet::description() const { return impl_->description; }

}  // namespace schreier
