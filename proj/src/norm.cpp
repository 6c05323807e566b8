#include "schreier/norm.hpp"

#include <bit>

#include "norm_impl.hpp"
#include "schreier/error.hpp"
#include "schreier/family_ops.hpp"

namespace schreier {

Partition Partition::dyadic() {
  Partition p;
  p.dyadic_ = true;
  return p;
}

Partition Partition::classes(std::vector<LazySet> sets) {
  if (sets.empty()) throw DomainError("partition needs at least one class");
  Partition p;
  p.sets_ = std::move(sets);
  return p;
}

std::optional<std::size_t> Partition::class_of(Nat n) const {
  if (n == 0) return std::nullopt;
  if (dyadic_) return static_cast<std::size_t>(std::countr_zero(n)) + 1;
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (sets_[i].contains(n)) {
      if (found) throw DomainError("partition classes overlap at " + std::to_string(n));
      found = i + 1;
    }
  return found;
}

LazySet Partition::member(std::size_t i) const {
  if (dyadic_) {
    if (i == 0 || i > 62) throw DomainError("dyadic class index out of range");
    return LazySet::arithmetic(Nat{1} << (i - 1), Nat{1} << i);
  }
  if (i == 0 || i > sets_.size()) throw DomainError("partition class index out of range");
  return sets_[i - 1];
}

std::optional<std::size_t> Partition::class_count() const {
  if (dyadic_) return std::nullopt;
  return sets_.size();
}

std::string Partition::describe() const {
  if (dyadic_) return "dyadic";
  std::string s = "[";
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (i) s += ",";
    s += sets_[i].description();
  }
  return s + "]";
}

namespace {

std::shared_ptr<NormEngine::Impl> make(NormEngine::Kind k) {
  auto p = std::make_shared<NormEngine::Impl>();
  p->kind = k;
  return p;
}

NormResult exact_result(Rational value, DualCert cert) {
  NormResult r;
  r.approx = to_long_double(value);
  r.value = std::move(value);
  r.certificate = std::move(cert);
  return r;
}

Rational sign_of(const Rational& a) { return a > 0 ? Rational(1) : a < 0 ? Rational(-1) : Rational(0); }

NormResult schreier_norm(const Family& f, const SparseVector& x) {
  std::vector<std::pair<Nat, Rational>> w;
  for (const auto& [k, a] : x.entries()) w.emplace_back(k, abs(a));
  WeightedMember best = max_weight_member(f, w);
  std::vector<SparseVector::Entry> fn;
  for (Nat k : best.witness) fn.emplace_back(k, sign_of(x[k]));
  return exact_result(best.value, {SparseVector(std::move(fn)), {best.witness}, "admissible set " + best.witness.str()});
}

// f(t) = max(|a_t|, sum over children); the optimum is a maximal-weight antichain.
Rational tree_best(const Tree& t, const SparseVector& x, Nat id, std::vector<Nat>& chosen) {
  Rational below = 0;
  std::vector<Nat> sub;
  for (Nat c : t.children(id)) below += tree_best(t, x, c, sub);
  if (id == 0) {
    chosen.insert(chosen.end(), sub.begin(), sub.end());
    return below;
  }
  Rational own = abs(x[id]);
  if (own >= below) {
    if (own > 0) chosen.push_back(id);
    return own;
  }
  chosen.insert(chosen.end(), sub.begin(), sub.end());
  return below;
}

}  // namespace

NormEngine NormEngine::ell1() { return NormEngine(make(Kind::ell1)); }
NormEngine NormEngine::sup() { return NormEngine(make(Kind::sup)); }

NormEngine NormEngine::schreier(const Ordinal& gamma) {
  auto p = make(Kind::schreier);
  p->ordinal = gamma;
  p->families.push_back(Family::schreier(gamma));
  return NormEngine(p);
}

NormEngine NormEngine::mixed(std::vector<Ordinal> gammas) {
  if (gammas.empty()) throw DomainError("mixed norm needs at least one index");
  auto p = make(Kind::mixed);
  for (std::size_t n = 0; n < gammas.size(); ++n) {
    p->families.push_back(Family::schreier(gammas[n]));
    p->weights.push_back(n + 1 < gammas.size() ? pow2_inverse(n + 1) : pow2_inverse(n));
  }
  p->gammas = std::move(gammas);
  return NormEngine(p);
}

NormEngine NormEngine::ex(const NormEngine& base, Partition partition) {
  if (!base.exact()) throw DomainError("the E_X construction needs an exact base norm");
  auto p = make(Kind::ex);
  p->base = std::make_shared<const NormEngine>(base);
  p->partition = std::move(partition);
  return NormEngine(p);
}

NormEngine NormEngine::z(const Ordinal& xi, const NormEngine& base, const Rational& vartheta, long double tolerance) {
  if (xi.is_zero()) throw DomainError("the Z construction needs xi >= 1");
  if (vartheta <= 0 || vartheta >= 1) throw DomainError("vartheta must lie in (0,1), got " + to_string(vartheta));
  if (!(tolerance > 0)) throw DomainError("tolerance must be positive");
  if (!base.exact()) throw DomainError("the Z construction needs an exact base norm");
  auto p = make(Kind::z);
  p->ordinal = xi;
  p->base = std::make_shared<const NormEngine>(base);
  p->vartheta = vartheta;
  p->tolerance = tolerance;
  return NormEngine(p);
}

NormEngine NormEngine::tree(Tree t) {
  auto p = make(Kind::tree);
  p->tree = std::move(t);
  return NormEngine(p);
}

NormEngine::Kind NormEngine::kind() const { return impl_->kind; }

const Ordinal& NormEngine::ordinal() const {
  if (kind() != Kind::schreier && kind() != Kind::z) throw DomainError("engine has no ordinal parameter");
  return impl_->ordinal;
}

const std::vector<Ordinal>& NormEngine::gammas() const {
  if (kind() != Kind::mixed) throw DomainError("engine is not a mixed sum");
  return impl_->gammas;
}

const NormEngine& NormEngine::base() const {
  if (!impl_->base) throw DomainError("engine has no base space");
  return *impl_->base;
}

const Partition& NormEngine::partition() const {
  if (!impl_->partition) throw DomainError("engine has no partition");
  return *impl_->partition;
}

const Tree& NormEngine::tree_shape() const {
  if (kind() != Kind::tree) throw DomainError("engine is not a tree norm");
  return impl_->tree;
}

const Rational& NormEngine::vartheta() const {
  if (kind() != Kind::z) throw DomainError("engine is not a Z norm");
  return impl_->vartheta;
}

long double NormEngine::tolerance() const { return impl_->tolerance; }

Ordinal NormEngine::z_level(std::size_t n) const {
  return omega_pow(ordinal()).fundamental(n) + Ordinal::natural(1);
}

NormResult NormEngine::norm(const SparseVector& x) const {
  const Impl& m = *impl_;
  switch (m.kind) {
    case Kind::ell1: {
      std::vector<SparseVector::Entry> fn;
      for (const auto& [k, a] : x.entries()) fn.emplace_back(k, sign_of(a));
      return exact_result(x.l1(), {SparseVector(std::move(fn)), {x.support()}, "support"});
    }
    case Kind::sup: {
      if (x.is_zero()) return exact_result(0, {});
      const SparseVector::Entry* best = &x.entries().front();
      for (const auto& en : x.entries())
        if (abs(en.second) > abs(best->second)) best = &en;
      return exact_result(abs(best->second), {SparseVector::basis(best->first, sign_of(best->second)),
                                              {FinSet{best->first}},
                                              "coordinate " + std::to_string(best->first)});
    }
    case Kind::schreier:
      return schreier_norm(m.families.front(), x);
    case Kind::mixed: {
      Rational value = 0;
      SparseVector fn;
      DualCert cert;
      for (std::size_t n = 0; n < m.families.size(); ++n) {
        NormResult part = schreier_norm(m.families[n], x);
        value += m.weights[n] * part.value;
        fn = fn + m.weights[n] * part.certificate.functional;
        cert.witness.push_back(part.certificate.witness.front());
      }
      cert.functional = std::move(fn);
      cert.description = "one admissible set per summand";
      return exact_result(value, std::move(cert));
    }
    case Kind::ex: {
      const auto& en = x.entries();
      for (const auto& [k, a] : en)
        if (!m.partition->class_of(k))
          throw DomainError("coordinate " + std::to_string(k) + " lies in no partition class");
      Rational best = 0;
      std::optional<std::pair<std::size_t, std::size_t>> arg;
      NormResult best_base;
      for (std::size_t i = 0; i < en.size(); ++i) {
        std::vector<SparseVector::Entry> q;
        for (std::size_t j = i; j < en.size(); ++j) {
          q.emplace_back(*m.partition->class_of(en[j].first), en[j].second);
          NormResult r = m.base->norm(SparseVector(q));
          if (!arg || r.value > best) {
            best = r.value;
            arg = {i, j};
            best_base = std::move(r);
          }
        }
      }
      if (!arg) return exact_result(0, {});
      Nat lo = en[arg->first].first, hi = en[arg->second].first;
      // pull the base functional back along q, over every n in [lo, hi]
      std::vector<SparseVector::Entry> fn;
      for (const auto& [cls, g] : best_base.certificate.functional.entries()) {
        if (m.partition->class_count() && cls > *m.partition->class_count()) continue;
        LazySet members = m.partition->member(cls);
        for (std::size_t j = 1;; ++j) {
          Nat v = members.at(j);
          if (v > hi) break;
          if (v >= lo) fn.emplace_back(v, g);
        }
      }
      DualCert cert{SparseVector(std::move(fn)), {lo == hi ? FinSet{lo} : FinSet{lo, hi}},
                    "interval [" + std::to_string(lo) + "," + std::to_string(hi) + "]"};
      for (auto& w : best_base.certificate.witness) cert.witness.push_back(std::move(w));
      return exact_result(best, std::move(cert));
    }
    case Kind::z:
      return z_norm(*this, x);
    case Kind::tree: {
      for (const auto& [k, a] : x.entries())
        if (k > m.tree.size()) throw DomainError("coordinate " + std::to_string(k) + " is not a tree node");
      std::vector<Nat> chosen;
      Rational value = tree_best(m.tree, x, 0, chosen);
      std::sort(chosen.begin(), chosen.end());
      DualCert cert;
      std::vector<SparseVector::Entry> fn;
      for (Nat id : chosen) {
        fn.emplace_back(id, sign_of(x[id]));
        cert.witness.push_back(FinSet{id});
      }
      cert.functional = SparseVector(std::move(fn));
      cert.description = "incomparable single-node segments";
      return exact_result(value, std::move(cert));
    }
  }
  throw DomainError("unknown norm kind");
}

Rational NormEngine::exact_norm(const SparseVector& x) const {
  if (!exact()) throw DomainError("the Z norm has no exact evaluation");
  return norm(x).value;
}

std::string NormEngine::describe() const {
  const Impl& m = *impl_;
  switch (m.kind) {
    case Kind::ell1:
      return "ell1";
    case Kind::sup:
      return "sup";
    case Kind::schreier:
      return "schreier(" + m.ordinal.str() + ")";
    case Kind::mixed: {
      std::string s = "mixed(";
      for (std::size_t i = 0; i < m.gammas.size(); ++i) s += (i ? "," : "") + m.gammas[i].str();
      return s + ")";
    }
    case Kind::ex:
      return "ex(" + m.base->describe() + "," + m.partition->describe() + ")";
    case Kind::z:
      return "z(" + m.ordinal.str() + "," + m.base->describe() + "," + to_string(m.vartheta) + ")";
    case Kind::tree:
      return "tree" + m.tree.str();
  }
  return "?";
}

SparseVector ex_quotient_apply(const NormEngine& engine, const SparseVector& x) {
  if (engine.kind() != NormEngine::Kind::ex) throw DomainError("quotient map needs an ex engine");
  std::vector<SparseVector::Entry> q;
  for (const auto& [k, a] : x.entries()) {
    auto cls = engine.partition().class_of(k);
    if (!cls) throw DomainError("coordinate " + std::to_string(k) + " lies in no partition class");
    q.emplace_back(*cls, a);
  }
  return SparseVector(std::move(q));
}

}  // namespace schreier
