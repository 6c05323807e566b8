#include "schreier/tree.hpp"

#include <algorithm>

#include "schreier/error.hpp"

namespace schreier {

Tree Tree::from_nodes(std::vector<NodePath> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  Tree t;
  t.children_.emplace_back();
  for (auto& p : nodes) {
    if (p.empty()) throw DomainError("tree nodes are non-empty sequences");
    for (Nat v : p)
      if (v == 0) throw DomainError("tree node entries are positive: " + path_str(p));
    Nat id = t.paths_.size() + 1;
    Nat parent = 0;
    if (p.size() > 1) {
      NodePath up(p.begin(), p.end() - 1);
      auto it = t.ids_.find(up);
      if (it == t.ids_.end()) throw DomainError("node set is not prefix-closed: missing " + path_str(up));
      parent = it->second;
    }
    t.ids_.emplace(p, id);
    t.paths_.push_back(std::move(p));
    t.parent_.push_back(parent);
    t.children_.emplace_back();
    t.children_[parent].push_back(id);
  }
  return t;
}

const NodePath& Tree::path(Nat id) const {
  if (id == 0 || id > paths_.size()) throw DomainError("no tree node with id " + std::to_string(id));
  return paths_[id - 1];
}

std::optional<Nat> Tree::id_of(const NodePath& p) const {
  auto it = ids_.find(p);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Nat Tree::parent(Nat id) const {
  path(id);
  return parent_[id - 1];
}

const std::vector<Nat>& Tree::children(Nat id) const {
  if (id > paths_.size()) throw DomainError("no tree node with id " + std::to_string(id));
  return children_[id];
}

bool Tree::ancestor_or_equal(Nat a, Nat b) const {
  const NodePath& pa = path(a);
  const NodePath& pb = path(b);
  return pa.size() <= pb.size() && std::equal(pa.begin(), pa.end(), pb.begin());
}

bool Tree::comparable(Nat a, Nat b) const { return ancestor_or_equal(a, b) || ancestor_or_equal(b, a); }

std::string Tree::path_str(const NodePath& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::string Tree::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (i) s += ",";
    s += path_str(paths_[i]);
  }
  return s + "}";
}

}  // namespace schreier
