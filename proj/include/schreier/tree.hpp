#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schreier/finset.hpp"

namespace schreier {

using NodePath = std::vector<Nat>;

// Finite prefix-closed set of non-empty sequences of positive integers. Nodes
// get ids 1..size() in lexicographic order, so a node precedes its descendants.
class Tree {
 public:
  Tree() = default;
  static Tree from_nodes(std::vector<NodePath> nodes);

  std::size_t size() const noexcept { return paths_.size(); }
  const NodePath& path(Nat id) const;
  std::optional<Nat> id_of(const NodePath& path) const;
  // 0 for top-level nodes.
  Nat parent(Nat id) const;
  const std::vector<Nat>& children(Nat id) const;  // id 0 lists the roots
  bool comparable(Nat a, Nat b) const;
  bool ancestor_or_equal(Nat a, Nat b) const;

  std::string str() const;
  static std::string path_str(const NodePath& path);

 private:
  std::vector<NodePath> paths_;
  std::map<NodePath, Nat> ids_;
  std::vector<Nat> parent_;
  std::vector<std::vector<Nat>> children_;
};

}  // namespace schreier
