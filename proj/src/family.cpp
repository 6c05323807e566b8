#include "schreier/family.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "schreier/error.hpp"

namespace schreier {

namespace {

constexpr std::uint64_t kFresh = ~std::uint64_t{0};

// Levels of nested Schreier families a single push may descend through.
constexpr int kMaxLevelDepth = 20000;
thread_local int level_depth = 0;

struct LevelGuard {
  LevelGuard() {
    if (++level_depth > kMaxLevelDepth) {
      --level_depth;
      throw BoundError("Schreier level descent exceeds " + std::to_string(kMaxLevelDepth) + " levels");
    }
  }
  ~LevelGuard() { --level_depth; }
  LevelGuard(const LevelGuard&) = delete;
  LevelGuard& operator=(const LevelGuard&) = delete;
};

State concat(std::uint64_t head, const State& tail) {
  State s;
  s.reserve(tail.size() + 1);
  s.push_back(head);
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

State tail_of(const State& s, std::size_t from) { return State(s.begin() + static_cast<std::ptrdiff_t>(from), s.end()); }

}  // namespace

struct Family::Node {
  virtual ~Node() = default;
  virtual Kind kind() const = 0;
  virtual std::optional<State> start() const = 0;
  virtual std::optional<State> push(const State& state, Nat x) const = 0;
  virtual std::string describe() const = 0;

  virtual bool contains(const FinSet& e) const {
    std::optional<State> s = start();
    if (!s) return false;
    for (Nat x : e) {
      s = push(*s, x);
      if (!s) return false;
    }
    return true;
  }
};

namespace {

using Kind = Family::Kind;

struct EmptyNode final : Family::Node {
  Kind kind() const override { return Kind::empty; }
  std::optional<State> start() const override { return std::nullopt; }
  std::optional<State> push(const State&, Nat) const override { return std::nullopt; }
  std::string describe() const override { return "empty"; }
};

struct SingletonEmptyNode final : Family::Node {
  Kind kind() const override { return Kind::singleton_empty; }
  std::optional<State> start() const override { return State{}; }
  std::optional<State> push(const State&, Nat) const override { return std::nullopt; }
  std::string describe() const override { return "{{}}"; }
};

struct AdmNode final : Family::Node {
  explicit AdmNode(std::uint64_t n) : n(n) {}
  Kind kind() const override { return Kind::adm; }
  std::optional<State> start() const override { return State{n}; }
  std::optional<State> push(const State& s, Nat) const override {
    if (s[0] == 0) return std::nullopt;
    return State{s[0] - 1};
  }
  std::string describe() const override { return "A(" + std::to_string(n) + ")"; }
  std::uint64_t n;
};

struct SchreierNode final : Family::Node {
  explicit SchreierNode(Ordinal xi) : xi(std::move(xi)) {
    LevelGuard guard;
    if (this->xi.is_successor()) child.emplace(Family::schreier(this->xi.predecessor()));
  }

  Kind kind() const override { return Kind::schreier; }

  std::optional<State> start() const override {
    if (xi.is_zero()) return State{1};
    return State{kFresh};
  }

  std::optional<State> push(const State& s, Nat x) const override {
    LevelGuard guard;
    if (xi.is_zero()) {
      if (s[0] == 0) return std::nullopt;
      return State{0};
    }
    if (xi.is_successor()) {
      const Family& c = *child;
      if (s[0] == kFresh) return concat(x - 1, *c.push(*c.start(), x));
      if (auto t = c.push(tail_of(s, 1), x)) return concat(s[0], *t);
      if (s[0] == 0) return std::nullopt;
      return concat(s[0] - 1, *c.push(*c.start(), x));
    }
    if (s[0] == kFresh) {
      const Family& c = limit_child(x);
      auto t = c.push(*c.start(), x);
      if (!t) return std::nullopt;
      return concat(x, *t);
    }
    auto t = limit_child(s[0]).push(tail_of(s, 1), x);
    if (!t) return std::nullopt;
    return concat(s[0], *t);
  }

  // S(xi[m] + 1)
  const Family& limit_child(Nat m) const {
    std::lock_guard lock(mutex);
    auto it = limit_children.find(m);
    if (it == limit_children.end())
      it = limit_children.emplace(m, Family::schreier(xi.fundamental(m) + Ordinal::natural(1))).first;
    return it->second;
  }

  std::string describe() const override { return "S(" + xi.str() + ")"; }

  Ordinal xi;
  std::optional<Family> child;
  mutable std::mutex mutex;
  mutable std::map<Nat, Family> limit_children;
};

struct ComposeNode final : Family::Node {
  ComposeNode(Family outer, Family inner) : outer(std::move(outer)), inner(std::move(inner)) {}
  Kind kind() const override { return Kind::compose; }

  std::optional<State> start() const override {
    if (!outer.start()) return std::nullopt;
    return State{kFresh};
  }

  // layout after the first element: [len F-state, F-state..., G-state...]
  std::optional<State> push(const State& s, Nat x) const override {
    if (s[0] == kFresh) return open_block(*outer.start(), x);
    std::size_t len = s[0];
    State fs(s.begin() + 1, s.begin() + 1 + static_cast<std::ptrdiff_t>(len));
    State gs = tail_of(s, 1 + len);
    if (auto g2 = inner.push(gs, x)) return pack(fs, *g2);
    return open_block(fs, x);
  }

  std::optional<State> open_block(const State& fs, Nat x) const {
    auto g0 = inner.start();
    if (!g0) return std::nullopt;
    auto g1 = inner.push(*g0, x);
    if (!g1) return std::nullopt;
    auto f1 = outer.push(fs, x);
    if (!f1) return std::nullopt;
    return pack(*f1, *g1);
  }

  static State pack(const State& fs, const State& gs) {
    State out;
    out.reserve(1 + fs.size() + gs.size());
    out.push_back(fs.size());
    out.insert(out.end(), fs.begin(), fs.end());
    out.insert(out.end(), gs.begin(), gs.end());
    return out;
  }

  std::string describe() const override { return outer.describe() + "[" + inner.describe() + "]"; }

  Family outer, inner;
};

struct ImageNode final : Family::Node {
  ImageNode(Family f, LazySet m) : family(std::move(f)), set(std::move(m)) {}
  Kind kind() const override { return Kind::image; }
  std::optional<State> start() const override { return family.start(); }
  std::optional<State> push(const State& s, Nat x) const override {
    auto idx = set.index_of(x);
    if (!idx) return std::nullopt;
    return family.push(s, *idx);
  }
  std::string describe() const override { return "image(" + family.describe() + ", " + set.description() + ")"; }
  Family family;
  LazySet set;
};

struct PreimageNode final : Family::Node {
  PreimageNode(Family f, LazySet m) : family(std::move(f)), set(std::move(m)) {}
  Kind kind() const override { return Kind::preimage; }
  std::optional<State> start() const override { return family.start(); }
  std::optional<State> push(const State& s, Nat x) const override { return family.push(s, set.at(x)); }
  std::string describe() const override { return "preimage(" + family.describe() + ", " + set.description() + ")"; }
  Family family;
  LazySet set;
};

struct UnionNode final : Family::Node {
  UnionNode(Family a, Family b) : a(std::move(a)), b(std::move(b)) {}
  Kind kind() const override { return Kind::unite; }

  // layout: [alive a, len a, a-state..., alive b, b-state...]
  static State pack(const std::optional<State>& sa, const std::optional<State>& sb) {
    State out;
    out.push_back(sa ? 1 : 0);
    out.push_back(sa ? sa->size() : 0);
    if (sa) out.insert(out.end(), sa->begin(), sa->end());
    out.push_back(sb ? 1 : 0);
    if (sb) out.insert(out.end(), sb->begin(), sb->end());
    return out;
  }

  std::optional<State> start() const override {
    auto sa = a.start(), sb = b.start();
    if (!sa && !sb) return std::nullopt;
    return pack(sa, sb);
  }

  std::optional<State> push(const State& s, Nat x) const override {
    std::size_t len = s[1];
    std::optional<State> sa, sb;
    if (s[0]) sa = a.push(State(s.begin() + 2, s.begin() + 2 + static_cast<std::ptrdiff_t>(len)), x);
    if (s[2 + len]) sb = b.push(tail_of(s, 3 + len), x);
    if (!sa && !sb) return std::nullopt;
    return pack(sa, sb);
  }

  std::string describe() const override { return "union(" + a.describe() + ", " + b.describe() + ")"; }
  Family a, b;
};

struct ExplicitNode final : Family::Node {
  explicit ExplicitNode(std::vector<FinSet> s) : sets(std::move(s)) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  }
  Kind kind() const override { return Kind::explicit_list; }

  // the automaton accepts prefixes of listed sets; membership is by lookup
  std::optional<State> start() const override {
    if (sets.empty()) return std::nullopt;
    return State{};
  }
  std::optional<State> push(const State& s, Nat x) const override {
    if (!s.empty() && x <= s.back()) return std::nullopt;
    for (const auto& e : sets) {
      if (e.size() <= s.size()) continue;
      if (std::equal(s.begin(), s.end(), e.begin()) && e[s.size()] == x) {
        State t = s;
        t.push_back(x);
        return t;
      }
    }
    return std::nullopt;
  }
  bool contains(const FinSet& e) const override { return std::binary_search(sets.begin(), sets.end(), e); }
  std::string describe() const override {
    std::string out = "explicit{";
    for (std::size_t i = 0; i < sets.size(); ++i) out += (i ? "," : "") + sets[i].str();
    return out + "}";
  }
  std::vector<FinSet> sets;
};

template <class T>
const T& as(const std::shared_ptr<const Family::Node>& node, const char* what) {
  auto p = dynamic_cast<const T*>(node.get());
  if (!p) throw DomainError(std::string("family is not ") + what);
  return *p;
}

}  // namespace

Family Family::empty() { return Family(std::make_shared<EmptyNode>()); }
Family Family::singleton_empty() { return Family(std::make_shared<SingletonEmptyNode>()); }
Family Family::adm(std::uint64_t n) { return Family(std::make_shared<AdmNode>(n)); }

Family Family::schreier(const Ordinal& xi) {
  // shared so that limit families reuse their memoised children
  static std::mutex mutex;
  static std::map<std::string, Family> registry;
  std::string key = xi.str();
  {
    std::lock_guard lock(mutex);
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
  }
  Family f(std::make_shared<SchreierNode>(xi));
  std::lock_guard lock(mutex);
  return registry.emplace(key, f).first->second;
}

Family Family::compose(const Family& outer, const Family& inner) {
  return Family(std::make_shared<ComposeNode>(outer, inner));
}
Family Family::image(const Family& family, const LazySet& set) { return Family(std::make_shared<ImageNode>(family, set)); }
Family Family::preimage(const Family& family, const LazySet& set) {
  return Family(std::make_shared<PreimageNode>(family, set));
}
Family Family::unite(const Family& a, const Family& b) { return Family(std::make_shared<UnionNode>(a, b)); }
Family Family::explicit_sets(std::vector<FinSet> sets) { return Family(std::make_shared<ExplicitNode>(std::move(sets))); }

Family::Kind Family::kind() const { return node_->kind(); }
std::optional<State> Family::start() const { return node_->start(); }
std::optional<State> Family::push(const State& state, Nat x) const { return node_->push(state, x); }
bool Family::contains(const FinSet& e) const { return node_->contains(e); }
std::string Family::describe() const { return node_->describe(); }

std::uint64_t Family::adm_size() const { return as<AdmNode>(node_, "A(n)").n; }
const Ordinal& Family::schreier_index() const { return as<SchreierNode>(node_, "a Schreier family").xi; }

const Family& Family::outer() const {
  if (auto c = dynamic_cast<const ComposeNode*>(node_.get())) return c->outer;
  if (auto u = dynamic_cast<const UnionNode*>(node_.get())) return u->a;
  if (auto i = dynamic_cast<const ImageNode*>(node_.get())) return i->family;
  return as<PreimageNode>(node_, "composite").family;
}

const Family& Family::inner() const {
  if (auto u = dynamic_cast<const UnionNode*>(node_.get())) return u->b;
  return as<ComposeNode>(node_, "a composition").inner;
}

const LazySet& Family::set() const {
  if (auto i = dynamic_cast<const ImageNode*>(node_.get())) return i->set;
  return as<PreimageNode>(node_, "an image or preimage").set;
}

const std::vector<FinSet>& Family::sets() const { return as<ExplicitNode>(node_, "explicit").sets; }

}  // namespace schreier
