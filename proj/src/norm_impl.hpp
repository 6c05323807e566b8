#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "schreier/family.hpp"
#include "schreier/norm.hpp"

namespace schreier {

struct NormEngine::Impl {
  Kind kind = Kind::ell1;
  Ordinal ordinal;
  std::vector<Ordinal> gammas;
  std::vector<Rational> weights;
  std::vector<Family> families;
  std::shared_ptr<const NormEngine> base;
  std::optional<Partition> partition;
  Tree tree;
  Rational vartheta;
  long double tolerance = kDefaultZTolerance;
};

NormResult z_norm(const NormEngine& engine, const SparseVector& x);

}  // namespace schreier
