#include "schreier/lp.hpp"

#include <optional>

#include "schreier/error.hpp"

namespace schreier {

LinearProgram::LinearProgram(std::size_t variables) : n_(variables), c_(variables) {}

void LinearProgram::add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
  if (coeffs.size() != n_) throw DomainError("constraint width does not match the variable count");
  rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LinearProgram::minimize(std::vector<Rational> objective) {
  if (objective.size() != n_) throw DomainError("objective width does not match the variable count");
  c_ = std::move(objective);
}

namespace {

class Tableau {
 public:
  std::vector<std::vector<Rational>> t;  // rows of [coefficients..., rhs]
  std::vector<std::size_t> basis;
  std::vector<Rational> z;  // reduced costs, last entry = -objective value
  std::size_t cols = 0;
  std::vector<bool> blocked;  // columns that may not enter

  void set_objective(const std::vector<Rational>& cost) {
    z.assign(cols + 1, Rational(0));
    for (std::size_t j = 0; j < cols; ++j) z[j] = cost[j];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Rational& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= cb * t[i][j];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || t[i][c] == 0) continue;
      Rational f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j)
        if (t[r][j] != 0) t[i][j] -= f * t[r][j];
    }
    if (z[c] != 0) {
      Rational f = z[c];
      for (std::size_t j = 0; j <= cols; ++j)
        if (t[r][j] != 0) z[j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // false when unbounded
  bool run() {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols; ++j)
        if (!blocked[j] && z[j] < 0) {
          enter = j;
          break;
        }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i][*enter] <= 0) continue;
        Rational ratio = t[i][cols] / t[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }
};

}  // namespace

LpSolution LinearProgram::solve() const {
  const std::size_t m = rows_.size();
  std::size_t slack_count = 0, art_count = 0;
  std::vector<Row> rows = rows_;
  for (auto& r : rows) {
    if (r.rhs < 0) {
      for (auto& v : r.a) v = -v;
      r.rhs = -r.rhs;
      if (r.rel == Relation::le)
        r.rel = Relation::ge;
      else if (r.rel == Relation::ge)
        r.rel = Relation::le;
    }
    if (r.rel != Relation::eq) ++slack_count;
    if (r.rel != Relation::le) ++art_count;
  }
  Tableau tab;
  tab.cols = n_ + slack_count + art_count;
  tab.t.assign(m, std::vector<Rational>(tab.cols + 1));
  tab.basis.assign(m, 0);
  tab.blocked.assign(tab.cols, false);
  std::size_t next_slack = n_, next_art = n_ + slack_count;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n_; ++j) tab.t[i][j] = rows[i].a[j];
    tab.t[i][tab.cols] = rows[i].rhs;
    if (rows[i].rel == Relation::le) {
      tab.t[i][next_slack] = 1;
      tab.basis[i] = next_slack++;
    } else {
      if (rows[i].rel == Relation::ge) tab.t[i][next_slack++] = -1;
      tab.t[i][next_art] = 1;
      tab.basis[i] = next_art++;
    }
  }
  const std::size_t first_art = n_ + slack_count;

  LpSolution sol;
  if (art_count > 0) {
    std::vector<Rational> phase1(tab.cols);
    for (std::size_t j = first_art; j < tab.cols; ++j) phase1[j] = 1;
    tab.set_objective(phase1);
    tab.run();
    if (tab.z[tab.cols] != 0) {
      sol.status = LpSolution::Status::infeasible;
      return sol;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    for (std::size_t i = 0; i < tab.t.size();) {
      if (tab.basis[i] < first_art) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < first_art; ++j)
        if (tab.t[i][j] != 0) {
          col = j;
          break;
        }
      if (col) {
        tab.pivot(i, *col);
        ++i;
      } else {
        tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
        tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (std::size_t j = first_art; j < tab.cols; ++j) tab.blocked[j] = true;
  }
  std::vector<Rational> cost(tab.cols);
  for (std::size_t j = 0; j < n_; ++j) cost[j] = c_[j];
  tab.set_objective(cost);
  if (!tab.run()) {
    sol.status = LpSolution::Status::unbounded;
    return sol;
  }
  sol.status = LpSolution::Status::optimal;
  sol.x.assign(n_, Rational(0));
  for (std::size_t i = 0; i < tab.t.size(); ++i)
    if (tab.basis[i] < n_) sol.x[tab.basis[i]] = tab.t[i][tab.cols];
  sol.value = -tab.z[tab.cols];
  return sol;
}

}  // namespace schreier
