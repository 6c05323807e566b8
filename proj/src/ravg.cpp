#include "schreier/ravg.hpp"

#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "schreier/error.hpp"
#include "schreier/family_ops.hpp"

namespace schreier {

namespace {

// Cached view of an ordinal for the averaging recursion, so the inner loop
// never rebuilds predecessors or fundamental sequences.
struct Level {
  enum class Kind { zero, successor, limit };
  Kind kind;
  Ordinal xi;
  const Level* pred = nullptr;
  mutable std::mutex mutex;
  mutable std::map<Nat, const Level*> children;
};

constexpr int kMaxLevels = 20000;

const Level& level_of(const Ordinal& xi, int depth = 0) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<Level>> registry;
  if (depth > kMaxLevels) throw BoundError("averaging level chain exceeds " + std::to_string(kMaxLevels));
  std::string key = xi.str();
  {
    std::lock_guard lock(mutex);
    if (auto it = registry.find(key); it != registry.end()) return *it->second;
  }
  auto lv = std::make_unique<Level>();
  lv->xi = xi;
  if (xi.is_zero()) {
    lv->kind = Level::Kind::zero;
  } else if (xi.is_successor()) {
    lv->kind = Level::Kind::successor;
    lv->pred = &level_of(xi.predecessor(), depth + 1);
  } else {
    lv->kind = Level::Kind::limit;
  }
  std::lock_guard lock(mutex);
  auto [it, inserted] = registry.emplace(key, std::move(lv));
  return *it->second;
}

const Level& limit_child(const Level& lv, Nat p) {
  {
    std::lock_guard lock(lv.mutex);
    if (auto it = lv.children.find(p); it != lv.children.end()) return *it->second;
  }
  const Level& c = level_of(lv.xi.fundamental(p) + Ordinal::natural(1));
  std::lock_guard lock(lv.mutex);
  lv.children.emplace(p, &c);
  return c;
}

constexpr Nat kNoCutoff = std::numeric_limits<Nat>::max();

struct Walker {
  const LazySet& m;
  Nat cutoff = kNoCutoff;
  std::vector<Measure::Entry>* out = nullptr;  // null: only advance the cursor
  std::size_t cursor = 0;                      // elements of M consumed

  // Appends one block of the given level scaled by `scale`. Returns false once
  // a point beyond the cutoff is met; nothing after it can matter.
  bool block(const Level& lv, const Rational& scale, int depth = 0) {
    if (depth > kMaxLevels) throw BoundError("averaging recursion exceeds " + std::to_string(kMaxLevels) + " levels");
    Nat p = m.at(cursor + 1);
    if (p > cutoff) return false;
    switch (lv.kind) {
      case Level::Kind::zero:
        if (out) out->emplace_back(p, scale);
        ++cursor;
        return true;
      case Level::Kind::limit:
        return block(limit_child(lv, p), scale, depth + 1);
      case Level::Kind::successor: {
        Rational sub;
        if (out) sub = scale / Rational(BigInt(static_cast<unsigned long>(p)));
        for (Nat i = 0; i < p; ++i)
          if (!block(*lv.pred, sub, depth + 1)) return false;
        return true;
      }
    }
    return true;
  }
};

}  // namespace

AverageBlock repeated_average(const Ordinal& xi, const LazySet& m, std::size_t n) {
  if (n == 0) throw DomainError("repeated averages are indexed from 1");
  const Level& lv = level_of(xi);
  Walker w{m};
  for (std::size_t k = 1; k < n; ++k) w.block(lv, Rational(1));
  AverageBlock b;
  b.first_index = w.cursor + 1;
  // locate the block cheaply first: weights of an oversized block would be huge rationals
  w.block(lv, Rational(1));
  w.cursor = b.first_index - 1;
  std::vector<Measure::Entry> weights;
  w.out = &weights;
  w.block(lv, Rational(1));
  b.last_index = w.cursor;
  b.measure = Measure(std::move(weights));
  return b;
}

Measure ravg_measure(const Ordinal& xi, const LazySet& m, std::size_t n) { return repeated_average(xi, m, n).measure; }

std::vector<Measure> repeated_averages_below(const Ordinal& xi, const LazySet& m, Nat cutoff) {
  const Level& lv = level_of(xi);
  std::vector<Measure> blocks;
  Walker w{m, cutoff};
  while (m.at(w.cursor + 1) <= cutoff) {
    std::vector<Measure::Entry> weights;
    w.out = &weights;
    bool complete = w.block(lv, Rational(1));
    blocks.emplace_back(std::move(weights));
    if (!complete) break;
  }
  return blocks;
}

ProbBlock::ProbBlock(Family family, Rule rule, std::string name, StreamFactory stream, MinimaFactory minima)
    : family_(std::move(family)),
      rule_(std::move(rule)),
      name_(std::move(name)),
      stream_(std::move(stream)),
      minima_(std::move(minima)) {}

ProbBlock::Stream ProbBlock::stream(const LazySet& m) const {
  if (stream_) return stream_(m);
  auto next = std::make_shared<std::size_t>(0);
  return [rule = rule_, m, next] { return rule(m, ++*next); };
}

ProbBlock::MinimaStream ProbBlock::minima(const LazySet& m) const {
  if (minima_) return minima_(m);
  return [s = stream(m)] { return s().min_support(); };
}

namespace {

// One walker over M for all blocks, so the n-th block costs its own size.
struct AverageStream {
  LazySet m;
  const Level* lv;
  Walker w;

  AverageStream(LazySet set, const Level& level) : m(std::move(set)), lv(&level), w{m} {}

  Measure next() {
    const std::size_t start = w.cursor;
    w.out = nullptr;
    w.block(*lv, Rational(1));
    w.cursor = start;
    std::vector<Measure::Entry> weights;
    w.out = &weights;
    w.block(*lv, Rational(1));
    w.out = nullptr;
    return Measure(std::move(weights));
  }

  Nat next_min() {
    const Nat first = m.at(w.cursor + 1);
    w.out = nullptr;
    w.block(*lv, Rational(1));
    return first;
  }
};

}  // namespace

ProbBlock ProbBlock::repeated_averages(const Ordinal& xi) {
  return ProbBlock(
      Family::schreier(xi), [xi](const LazySet& m, std::size_t n) { return ravg_measure(xi, m, n); },
      "S^" + xi.str(), [xi](const LazySet& m) -> Stream {
        auto s = std::make_shared<AverageStream>(m, level_of(xi));
        return [s] { return s->next(); };
      },
      [xi](const LazySet& m) -> MinimaStream {
        auto s = std::make_shared<AverageStream>(m, level_of(xi));
        return [s] { return s->next_min(); };
      });
}

ProbBlock convolve(const ProbBlock& q, const ProbBlock& p) {
  ProbBlock::Rule rule = [q, p](const LazySet& m, std::size_t n) {
    if (n == 0) throw DomainError("probability blocks are indexed from 1");
    // L is the sequence of minima of P_{M,1}, P_{M,2}, ...; only the minima are kept
    struct Minima {
      std::mutex mutex;
      ProbBlock::MinimaStream next;
      std::size_t produced = 0;
    };
    auto st = std::make_shared<Minima>();
    st->next = p.minima(m);
    LazySet l(
        [st](std::size_t i) -> std::optional<Nat> {
          std::lock_guard lock(st->mutex);
          std::optional<Nat> v;
          while (st->produced < i) {
            v = st->next();
            ++st->produced;
          }
          return v;
        },
        "minima(" + p.name() + ", " + m.description() + ")", m.probe_limit());
    Measure ql = q.measure(l, n);
    // second pass: P_{M,i} again in order, keeping the blocks ql charges
    ProbBlock::Stream again = p.stream(m);
    std::size_t produced = 0;
    Measure pi;
    std::vector<Measure::Entry> out;
    for (const auto& [li, weight] : ql.weights()) {
      auto i = l.index_of(li);
      if (!i) throw DomainError("outer measure charges a point outside the minima sequence");
      while (produced < *i) {
        pi = again();
        ++produced;
      }
      for (const auto& [x, w] : pi.weights()) out.emplace_back(x, weight * w);
    }
    return Measure(std::move(out));
  };
  return ProbBlock(Family::compose(q.family(), p.family()), rule, q.name() + "*" + p.name());
}

ValidationReport block_validate(const ProbBlock& b, const std::vector<std::pair<LazySet, std::size_t>>& samples) {
  ValidationReport rep;
  for (const auto& [m, depth] : samples) {
    FinSet used;
    std::size_t offset = 0;
    for (std::size_t r = 1; r <= depth; ++r) {
      auto issue = [&](const std::string& kind, const std::string& detail) {
        return BlockIssue{kind, m.description(), r, detail};
      };
      try {
        Measure mr = b.measure(m, r);
        ++rep.checked;
        if (mr.mass() != 1) rep.violations.push_back(issue("mass", "total mass " + to_string(mr.mass())));
        Segment seg = initial_max_segment(m, b.family(), offset);
        FinSet supp = mr.support();
        if (supp != seg.elements)
          rep.violations.push_back(issue("support", "support " + supp.str() + " but partition block " + seg.elements.str()));
        Measure shifted = b.measure(m.minus(used), 1);
        if (!(shifted == mr)) rep.violations.push_back(issue("shift", "measure on M minus earlier supports differs"));
        used = used.unite(supp);
        offset += seg.elements.size();
      } catch (const BoundError& e) {
        rep.unresolved.push_back(issue("bound", "r=" + std::to_string(r) + ".." + std::to_string(depth) + ": " + e.what()));
        break;
      }
    }
  }
  return rep;
}

SufficiencyResult sufficiency_sup(const ProbBlock& b, const Family& g, const LazySet& n, std::size_t bound) {
  Measure p = b.measure(n, 1);
  if (p.weights().size() > bound)
    throw BoundError("support of size " + std::to_string(p.weights().size()) + " exceeds enumeration bound " + std::to_string(bound));
  auto best = max_weight_member(g, p.weights());
  return {best.value, best.witness};
}

FastGrowReport fastgrow_check(const Ordinal& xi, const LazySet& k, const LazySet& l, const Rational& eps, Nat n_max) {
  if (eps <= 0) throw DomainError("epsilon must be positive");
  FastGrowReport rep;
  rep.bound = 1 + eps;
  std::map<Nat, Rational> total;
  for (const Measure& block : repeated_averages_below(xi, l, n_max))
    for (const auto& [x, w] : block.weights()) total[x] += w;
  std::vector<std::pair<Nat, Rational>> weights(total.begin(), total.end());
  auto best = max_weight_member(Family::preimage(Family::schreier(xi), k), weights);
  rep.max_sum = best.value;
  rep.argmax = best.witness;
  rep.bound_holds = rep.max_sum <= rep.bound;

  std::size_t probed = std::max<std::size_t>(l.consumed(), 2);
  for (std::size_t n = 1; n < probed; ++n) {
    Rational lhs = Rational(BigInt(static_cast<unsigned long>(k.at(l.at(n))))) * (1 + 2 * eps);
    Rational rhs = Rational(BigInt(static_cast<unsigned long>(l.at(n + 1)))) * eps;
    ++rep.checked_terms;
    if (!(lhs < rhs)) {
      rep.condition_holds = false;
      if (!rep.first_violation) rep.first_violation = n;
    }
  }
  return rep;
}

}  // namespace schreier
