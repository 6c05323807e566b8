#pragma once

#include <cstddef>
#include <vector>

#include "schreier/rational.hpp"

namespace schreier {

enum class Relation { le, ge, eq };

struct LpSolution {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  std::vector<Rational> x;
  Rational value;
};

// min c.x subject to rows and x >= 0, solved exactly by the two-phase
// simplex method with Bland's rule (no cycling).
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variables);

  void add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs);
  void minimize(std::vector<Rational> objective);
  std::size_t variables() const { return n_; }
  std::size_t constraints() const { return rows_.size(); }

  LpSolution solve() const;

 private:
  struct Row {
    std::vector<Rational> a;
    Relation rel;
    Rational rhs;
  };
  std::size_t n_;
  std::vector<Row> rows_;
  std::vector<Rational> c_;
};

}  // namespace schreier
