#include "schreier/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "schreier/error.hpp"

namespace schreier {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  return j.at(key);
}

Nat nat_from_json(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError("expected a non-negative integer, got " + j.dump(), 0);
  return j.get<Nat>();
}

}  // namespace

Json load_json(const std::string& text) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw DomainError("cannot read " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  throw ParseError("rationals are written as \"p/q\" strings, got " + j.dump(), 0);
}

Ordinal ordinal_from_json(const Json& j) {
  if (j.is_string()) return Ordinal::parse(j.get<std::string>());
  if (j.is_number_unsigned() || j.is_number_integer()) return Ordinal::natural(nat_from_json(j));
  throw ParseError("ordinals are written as strings, got " + j.dump(), 0);
}

FinSet finset_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("sets are JSON arrays, got " + j.dump(), 0);
  std::vector<Nat> v;
  for (const auto& x : j) v.push_back(nat_from_json(x));
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) throw DomainError("set elements must be strictly increasing: " + j.dump());
  for (Nat x : v)
    if (x == 0) throw DomainError("set elements are positive: " + j.dump());
  return FinSet(std::move(v));
}

LazySet lazyset_from_json(const Json& j, std::size_t probe_limit) {
  if (j.is_string()) return LazySet::parse(j.get<std::string>(), probe_limit);
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "naturals") return LazySet::naturals(probe_limit);
  if (kind == "arith") return LazySet::arithmetic(nat_from_json(field(j, "start")), nat_from_json(field(j, "step")), probe_limit);
  if (kind == "geom") return LazySet::geometric(nat_from_json(field(j, "start")), nat_from_json(field(j, "ratio")), probe_limit);
  if (kind == "list-prefix") {
    std::vector<Nat> prefix;
    for (const auto& x : field(j, "prefix")) prefix.push_back(nat_from_json(x));
    return LazySet::with_prefix(std::move(prefix), nat_from_json(field(j, "tail_step")), probe_limit);
  }
  throw ParseError("unknown set kind '" + kind + "'", 0);
}

Family family_from_json(const Json& j, std::size_t probe_limit) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "schreier") return Family::schreier(ordinal_from_json(field(j, "xi")));
  if (type == "adm") return Family::adm(nat_from_json(field(j, "n")));
  if (type == "compose")
    return Family::compose(family_from_json(field(j, "outer"), probe_limit), family_from_json(field(j, "inner"), probe_limit));
  if (type == "image")
    return Family::image(family_from_json(field(j, "family"), probe_limit), lazyset_from_json(field(j, "set"), probe_limit));
  if (type == "preimage")
    return Family::preimage(family_from_json(field(j, "family"), probe_limit), lazyset_from_json(field(j, "set"), probe_limit));
  if (type == "union")
    return Family::unite(family_from_json(field(j, "left"), probe_limit), family_from_json(field(j, "right"), probe_limit));
  if (type == "explicit") {
    std::vector<FinSet> sets;
    for (const auto& s : field(j, "sets")) sets.push_back(finset_from_json(s));
    return Family::explicit_sets(std::move(sets));
  }
  if (type == "empty") return Family::empty();
  if (type == "singleton-empty") return Family::singleton_empty();
  throw ParseError("unknown family type '" + type + "'", 0);
}

NormEngine engine_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "ell1") return NormEngine::ell1();
  if (kind == "sup" || kind == "c0") return NormEngine::sup();
  if (kind == "schreier") return NormEngine::schreier(ordinal_from_json(field(j, "gamma")));
  if (kind == "mixed") {
    std::vector<Ordinal> g;
    for (const auto& x : field(j, "gammas")) g.push_back(ordinal_from_json(x));
    return NormEngine::mixed(std::move(g));
  }
  if (kind == "ex") {
    NormEngine base = engine_from_json(field(j, "base"));
    const Json& p = field(j, "partition");
    if (p.is_string() && p.get<std::string>() == "dyadic") return NormEngine::ex(base, Partition::dyadic());
    if (!p.is_array()) throw ParseError("partition is \"dyadic\" or a list of sets", 0);
    std::vector<LazySet> sets;
    for (const auto& s : p) sets.push_back(lazyset_from_json(s));
    return NormEngine::ex(base, Partition::classes(std::move(sets)));
  }
  if (kind == "z") {
    long double tol = kDefaultZTolerance;
    if (j.contains("tolerance")) tol = j.at("tolerance").get<double>();
    Rational theta = j.contains("vartheta") ? rational_from_json(j.at("vartheta")) : Rational(1, 2);
    return NormEngine::z(ordinal_from_json(field(j, "xi")), engine_from_json(field(j, "base")), theta, tol);
  }
  if (kind == "tree") {
    std::vector<NodePath> nodes;
    for (const auto& n : field(j, "nodes")) {
      NodePath p;
      for (const auto& x : n) p.push_back(nat_from_json(x));
      nodes.push_back(std::move(p));
    }
    return NormEngine::tree(Tree::from_nodes(std::move(nodes)));
  }
  throw ParseError("unknown engine kind '" + kind + "'", 0);
}

SparseVector vector_from_json(const Json& j, const NormEngine* engine) {
  std::vector<SparseVector::Entry> e;
  for (const auto& c : field(j, "coords")) {
    if (!c.is_array() || c.size() != 2) throw ParseError("coordinates are [index, \"p/q\"] pairs, got " + c.dump(), 0);
    Nat k;
    if (c[0].is_array()) {
      if (!engine || engine->kind() != NormEngine::Kind::tree)
        throw DomainError("node paths need a tree engine");
      NodePath p;
      for (const auto& x : c[0]) p.push_back(nat_from_json(x));
      auto id = engine->tree_shape().id_of(p);
      if (!id) throw DomainError("node " + Tree::path_str(p) + " is not in the tree");
      k = *id;
    } else {
      k = nat_from_json(c[0]);
    }
    e.emplace_back(k, rational_from_json(c[1]));
  }
  return SparseVector(std::move(e));
}

Instance instance_from_json(const NormEngine& engine, const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.rfind("basis:", 0) == 0) {
      try {
        return Instance::basis(engine, std::stoul(s.substr(6)));
      } catch (const std::logic_error&) {
        throw ParseError("bad basis size in '" + s + "'", 6);
      }
    }
    throw ParseError("vectors are a list or \"basis:N\", got '" + s + "'", 0);
  }
  const Json& list = j.is_object() ? field(j, "vectors") : j;
  if (!list.is_array()) throw ParseError("vectors must be an array", 0);
  Instance inst{engine, {}};
  for (const auto& v : list) inst.vectors.push_back(vector_from_json(v, &engine));
  return inst;
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const FinSet& e) { return e.vec(); }

Json to_json(const Measure& m) {
  Json w = Json::array();
  for (const auto& [k, q] : m.weights()) w.push_back({k, to_string(q)});
  return {{"weights", w}};
}

Json to_json(const SparseVector& x, const NormEngine* engine) {
  const bool tree = engine && engine->kind() == NormEngine::Kind::tree;
  Json c = Json::array();
  for (const auto& [k, q] : x.entries()) {
    if (tree)
      c.push_back({engine->tree_shape().path(k), to_string(q)});
    else
      c.push_back({k, to_string(q)});
  }
  return {{"coords", c}};
}

std::string decimal(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.18Lg", v);
  return buf;
}

Json to_json(const NormResult& r, const NormEngine& engine) {
  Json j;
  j["exact"] = r.exact;
  if (r.exact) {
    j["value"] = to_string(r.value);
    Json w = Json::array();
    for (const auto& s : r.certificate.witness) {
      if (engine.kind() == NormEngine::Kind::tree) {
        Json seg = Json::array();
        for (Nat id : s) seg.push_back(engine.tree_shape().path(id));
        w.push_back(seg);
      } else {
        w.push_back(to_json(s));
      }
    }
    j["certificate"] = {{"description", r.certificate.description},
                        {"functional", to_json(r.certificate.functional, &engine)["coords"]},
                        {"witness", w}};
  } else {
    j["value"] = decimal(r.approx);
    j["error_bound"] = decimal(r.error_bound);
    Json trace = Json::array();
    for (long double t : r.trace) trace.push_back(decimal(t));
    j["certificate"] = {{"description", r.certificate.description}, {"levels", r.levels}, {"trace", trace}};
  }
  return j;
}

Json to_json(const CertReport& r) {
  Json j;
  j["family"] = r.family;
  j["variant"] = r.variant;
  j["epsilon"] = to_string(r.epsilon);
  j["passed"] = r.passed;
  j["exact"] = r.exact;
  j["sets_checked"] = r.sets_checked;
  j["worst_set"] = to_json(r.worst_set);
  j["worst_signs"] = r.worst_signs;
  j["worst_margin"] = r.exact ? Json(to_string(r.worst_margin)) : Json(decimal(r.worst_margin_approx));
  Json a = Json::array();
  for (const auto& q : r.argmin) a.push_back(to_string(q));
  j["argmin"] = a;
  j["first_failure"] = r.first_failure ? to_json(*r.first_failure) : Json(nullptr);
  return j;
}

namespace {

Json row_json(const NullRow& r) {
  return {{"sample", r.sample},
          {"n", r.n},
          {"value", r.value != 0 || r.approx == 0 ? to_string(r.value) : decimal(r.approx)},
          {"delta", to_string(r.delta)},
          {"ok", r.ok}};
}

}  // namespace

Json to_json(const NullReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(row_json(row));
  return {{"passed", r.passed},
          {"samples", r.samples},
          {"rows", rows},
          {"first_failure", r.first_failure ? row_json(*r.first_failure) : Json(nullptr)}};
}

Json to_json(const DichotomyResult& r) {
  Json j;
  j["outcome"] = outcome_name(r.outcome);
  j["found_i"] = r.found_i;
  j["found_ii"] = r.found_ii;
  j["eps1"] = r.found_i ? Json(to_string(r.eps1)) : Json(nullptr);
  j["m_prefix"] = r.m_prefix;
  j["value"] = r.found_ii ? Json(to_string(r.value)) : Json(nullptr);
  j["n_prefix"] = r.n_prefix;
  j["note"] = r.note;
  return j;
}

}  // namespace schreier
