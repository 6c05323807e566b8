#include "schreier/family_ops.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "schreier/error.hpp"

namespace schreier {

bool is_member(const FinSet& e, const Family& f) { return f.contains(e); }

bool is_maximal(const FinSet& e, const Family& f) {
  if (e.empty()) throw DomainError("maximality is defined for non-empty sets");
  if (!f.contains(e)) throw DomainError("set " + e.str() + " is not a member of " + f.describe());
  return !f.contains(e.with(e.max() + 1));
}

Segment initial_max_segment(const LazySet& m, const Family& f, std::size_t offset) {
  Segment seg;
  seg.first_index = offset + 1;
  auto s = f.start();
  if (!s) throw DomainError("family " + f.describe() + " is empty");
  std::vector<Nat> elems;
  std::size_t i = offset;
  try {
    while (true) {
      ++i;
      Nat x = m.at(i);
      auto t = f.push(*s, x);
      if (!t) break;
      s = std::move(t);
      elems.push_back(x);
    }
  } catch (const BoundError& err) {
    throw BoundError("no maximal initial segment within the probe bound: " + std::string(err.what()));
  }
  if (elems.empty()) throw DomainError("family " + f.describe() + " does not contain the singleton {" + std::to_string(m.at(offset + 1)) + "}");
  seg.elements = FinSet(std::move(elems));
  seg.consumed = i - offset;
  return seg;
}

std::vector<PartitionBlock> partition_prefix(const LazySet& m, const Family& f, std::size_t count) {
  std::vector<PartitionBlock> blocks;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < count; ++k) {
    Segment seg = initial_max_segment(m, f, offset);
    PartitionBlock b;
    b.first_index = offset + 1;
    b.last_index = offset + seg.elements.size();
    b.elements = std::move(seg.elements);
    offset = b.last_index;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

PartitionBlock partition(const LazySet& m, const Family& f, std::size_t n) {
  if (n == 0) throw DomainError("partition blocks are indexed from 1");
  return partition_prefix(m, f, n).back();
}

namespace {

void check_bound(Nat n, Nat bound) {
  if (n > bound) throw BoundError("enumeration bound " + std::to_string(bound) + " exceeded by " + std::to_string(n));
  if (n > 63) throw DomainError("enumeration is limited to 63 points");
}


}  // namespace

std::vector<FinSet> enumerate_restriction(const Family& f, Nat n, Nat bound) {
  check_bound(n, bound);
  std::vector<FinSet> out;
  if (f.kind() == Family::Kind::explicit_list) {
    for (const auto& e : f.sets())
      if (e.empty() || e.max() <= n) out.push_back(e);
  } else {
    auto s0 = f.start();
    if (!s0) return out;
    std::vector<Nat> cur;
    std::function<void(const State&, Nat)> dfs = [&](const State& s, Nat from) {
      out.emplace_back(cur);
      for (Nat x = from; x <= n; ++x) {
        if (auto t = f.push(s, x)) {
          cur.push_back(x);
          dfs(*t, x + 1);
          cur.pop_back();
        }
      }
    };
    dfs(*s0, 1);
  }
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

RegularityReport check_regularity(const Family& f, Nat n, Nat bound) {
  check_bound(n, bound);
  RegularityReport rep;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<bool> member(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) member[mask] = f.contains(FinSet::from_mask(mask));
  constexpr std::size_t kMaxReported = 10;
  auto report = [&](const std::string& msg) {
    if (rep.counterexamples.size() < kMaxReported) rep.counterexamples.push_back(msg);
  };
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (!member[mask]) continue;
    ++rep.members;
    for (Nat i = 0; i < n; ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      if (!(mask & bit)) continue;
      if (!member[mask & ~bit]) {
        rep.hereditary = false;
        report("hereditary: " + FinSet::from_mask(mask).str() + " in F but " + FinSet::from_mask(mask & ~bit).str() + " is not");
      }
      // single-step spreads generate all spreads inside {1..n}
      if (i + 1 < n && !(mask & (bit << 1)) && !member[(mask & ~bit) | (bit << 1)]) {
        rep.spreading = false;
        report("spreading: " + FinSet::from_mask(mask).str() + " in F but " + FinSet::from_mask((mask & ~bit) | (bit << 1)).str() + " is not");
      }
    }
  }
  return rep;
}

CbIndex cb_symbolic(const Family& f) {
  const Ordinal one = Ordinal::natural(1);
  switch (f.kind()) {
    case Family::Kind::empty: return {Ordinal(), true};
    case Family::Kind::singleton_empty: return {one, true};
    case Family::Kind::adm: return {Ordinal::natural(f.adm_size()) + one, true};
    case Family::Kind::schreier: return {omega_pow(f.schreier_index()) + one, true};
    case Family::Kind::compose: {
      CbIndex a = cb_symbolic(f.inner()), b = cb_symbolic(f.outer());
      if (a.value.is_zero() || b.value.is_zero()) return {Ordinal(), a.exact && b.exact};
      // CB(F) = beta + 1, CB(G) = alpha + 1  ==>  CB(F[G]) = alpha * beta + 1
      return {a.value.predecessor() * b.value.predecessor() + one, a.exact && b.exact};
    }
    case Family::Kind::preimage: return cb_symbolic(f.outer());
    case Family::Kind::image: return {cb_symbolic(f.outer()).value, false};
    case Family::Kind::unite: {
      CbIndex a = cb_symbolic(f.outer()), b = cb_symbolic(f.inner());
      return {std::max(a.value, b.value), a.exact && b.exact};
    }
    case Family::Kind::explicit_list: return {f.sets().empty() ? Ordinal() : one, true};
  }
  throw DomainError("unknown family kind");
}

std::uint64_t cb_probe_rank(const FinSet& e, const Family& f, Nat n) {
  if (!f.contains(e)) throw DomainError("set " + e.str() + " is not a member of " + f.describe());
  if (!e.empty() && n < e.max()) throw DomainError("probe bound must be at least max E");
  if (f.kind() == Family::Kind::explicit_list) {
    std::uint64_t best = 0;
    for (const auto& g : f.sets())
      if (g.size() > e.size() && (g.empty() || g.max() <= n) && std::equal(e.begin(), e.end(), g.begin()))
        best = std::max<std::uint64_t>(best, g.size() - e.size());
    return best;
  }
  auto s = f.start();
  for (Nat x : e) s = f.push(*s, x);
  std::unordered_map<State, std::uint64_t, StateHash> memo;
  // key = automaton state followed by the last element read
  std::function<std::uint64_t(const State&, Nat)> rank = [&](const State& st, Nat last) -> std::uint64_t {
    State key = st;
    key.push_back(last);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t best = 0;
    for (Nat x = last + 1; x <= n; ++x)
      if (auto t = f.push(st, x)) best = std::max(best, 1 + rank(*t, x));
    memo.emplace(std::move(key), best);
    return best;
  };
  return rank(*s, e.empty() ? 0 : e.max());
}

WeightedMember max_weight_member(const Family& f, std::span<const std::pair<Nat, Rational>> weights) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].second < 0) throw DomainError("weights must be non-negative");
    if (i && weights[i - 1].first >= weights[i].first) throw DomainError("weight coordinates must increase");
  }
  WeightedMember result{Rational(0), FinSet()};
  if (f.kind() == Family::Kind::explicit_list) {
    for (const auto& e : f.sets()) {
      Rational total = 0;
      bool inside = true;
      for (Nat x : e) {
        auto it = std::lower_bound(weights.begin(), weights.end(), x,
                                   [](const auto& p, Nat v) { return p.first < v; });
        if (it == weights.end() || it->first != x) {
          inside = false;
          break;
        }
        total += it->second;
      }
      if (inside && total > result.value) result = {total, e};
    }
    return result;
  }
  auto s0 = f.start();
  if (!s0) return result;
  const std::size_t m = weights.size();
  std::vector<std::unordered_map<State, Rational, StateHash>> memo(m + 1);
  std::function<Rational(std::size_t, const State&)> best = [&](std::size_t pos, const State& st) -> Rational {
    if (pos == m) return Rational(0);
    if (auto it = memo[pos].find(st); it != memo[pos].end()) return it->second;
    Rational v = best(pos + 1, st);
    if (weights[pos].second > 0)
      if (auto t = f.push(st, weights[pos].first)) {
        Rational take = weights[pos].second + best(pos + 1, *t);
        if (take > v) v = take;
      }
    memo[pos].emplace(st, v);
    return v;
  };
  result.value = best(0, *s0);
  std::vector<Nat> witness;
  State st = *s0;
  for (std::size_t pos = 0; pos < m; ++pos) {
    if (weights[pos].second <= 0) continue;
    auto t = f.push(st, weights[pos].first);
    if (t && weights[pos].second + best(pos + 1, *t) == best(pos, st)) {
      witness.push_back(weights[pos].first);
      st = std::move(*t);
    }
  }
  result.witness = FinSet(std::move(witness));
  return result;
}

}  // namespace schreier
