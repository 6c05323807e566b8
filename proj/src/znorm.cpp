#include <algorithm>
#include <bit>
#include <cstdint>
#include <cfloat>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "norm_impl.hpp"
#include "schreier/error.hpp"

namespace schreier {

namespace {

constexpr int kMaxIterations = 500;
constexpr std::size_t kMaxLevels = 120;

struct Table {
  std::size_t m = 0;
  std::vector<long double> value, error;
  long double& v(std::size_t p, std::size_t e) { return value[p * m + e]; }
  long double& err(std::size_t p, std::size_t e) { return error[p * m + e]; }
};

constexpr std::size_t kMaxSupport = 20;

// Best sum of cell(q, r) over successive runs [q, r] inside [p, e], other
// than [p, e] itself, with no constraint on the run starts.
long double best_runs(std::size_t p, std::size_t e, const std::function<long double(std::size_t, std::size_t)>& cell) {
  const std::size_t len = e - p + 1;
  std::vector<long double> u(len + 1, 0);
  for (std::size_t q = e + 1; q-- > p;) {
    long double best = u[q - p + 1];
    for (std::size_t r = q; r <= e; ++r)
      if (!(q == p && r == e)) best = std::max(best, cell(q, r) + u[r - p + 1]);
    u[q - p] = best;
  }
  return u[0];
}

// Position masks of the support whose coordinates form a member of f.
std::vector<std::uint32_t> admissible_masks(const Family& f, const std::vector<Nat>& coord) {
  std::vector<std::uint32_t> out;
  std::function<void(std::size_t, const State&, std::uint32_t)> go = [&](std::size_t from, const State& s,
                                                                         std::uint32_t mask) {
    out.push_back(mask);
    for (std::size_t q = from; q < coord.size(); ++q)
      if (auto next = f.push(s, coord[q])) go(q + 1, *next, mask | (std::uint32_t{1} << q));
  };
  if (auto s0 = f.start()) go(0, *s0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// Recursion on runs of the support: an interval meets the support in a run of
// consecutive support points, and pushing each interval's minimum up to the
// run's first coordinate only helps since the families are spreading. Every
// proper run is solved first; the run covering the whole support enters as
// the unknown t and is found by iterating the monotone contraction
//   t -> max(|x|_E, (sum_n theta_n^2 max(D_n, t)^2)^(1/2)).
NormResult z_norm(const NormEngine& engine, const SparseVector& x) {
  const auto& entries = x.entries();
  const std::size_t m = entries.size();
  NormResult out;
  out.exact = false;
  if (m == 0) return out;

  const long double theta = to_long_double(engine.vartheta());
  const long double lip = theta / std::sqrt(3.0L);
  const long double tol = engine.tolerance();
  // local budget per run, so that accumulated error stays below tol
  const long double local = tol * (1 - 2 * std::min(lip, 0.49L)) / (8.0L * static_cast<long double>(m));

  std::vector<Nat> coord(m);
  std::vector<long double> mag(m);
  for (std::size_t i = 0; i < m; ++i) {
    coord[i] = entries[i].first;
    mag[i] = std::fabs(to_long_double(entries[i].second));
  }
  std::vector<long double> prefix(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + mag[i];

  if (m > kMaxSupport)
    throw BoundError("Z norm evaluation is limited to supports of size " + std::to_string(kMaxSupport));

  // Levels enter only through the start sets they admit; levels admitting
  // the same sets share a class.
  std::vector<std::vector<std::uint32_t>> classes;
  std::vector<std::size_t> class_of_level{0};
  auto level_class = [&](std::size_t n) {
    while (class_of_level.size() <= n) {
      // the levels are nested, so a level admitting every start set is final
      if (!classes.empty() && classes[class_of_level.back()].size() == (std::size_t{1} << m)) {
        class_of_level.push_back(class_of_level.back());
        continue;
      }
      auto masks = admissible_masks(Family::schreier(engine.z_level(class_of_level.size())), coord);
      auto it = std::find(classes.begin(), classes.end(), masks);
      class_of_level.push_back(static_cast<std::size_t>(it - classes.begin()));
      if (it == classes.end()) classes.push_back(std::move(masks));
    }
    return class_of_level[n];
  };

  Table tab;
  tab.m = m;
  tab.value.assign(m * m, 0);
  tab.error.assign(m * m, 0);
  auto error_cell = [&](std::size_t q, std::size_t r) { return tab.err(q, r); };

  for (std::size_t len = 1; len <= m; ++len) {
    for (std::size_t p = 0; p + len <= m; ++p) {
      const std::size_t e = p + len - 1;
      const bool top = len == m;
      std::vector<SparseVector::Entry> sub(entries.begin() + p, entries.begin() + e + 1);
      const long double base = to_long_double(engine.base().exact_norm(SparseVector(std::move(sub))));
      const long double l1 = prefix[e + 1] - prefix[p];
      const long double scale = std::max(l1, 1.0L);

      // levels needed so the omitted tail of the l2 sum stays under the budget
      std::size_t nmax = 1;
      while (nmax < kMaxLevels && theta * std::ldexp(l1, -static_cast<int>(nmax)) / std::sqrt(3.0L) > local / 4)
        ++nmax;
      const long double tail = theta * std::ldexp(l1, -static_cast<int>(nmax)) / std::sqrt(3.0L);

      std::vector<long double> d(nmax + 1, 0);
      if (len > 1) {
        // best run end from each start q given the next start
        auto best_from = [&](std::size_t q, std::size_t limit) {
          long double b = 0;
          for (std::size_t r = q; r <= limit; ++r)
            if (!(q == p && r == e)) b = std::max(b, tab.v(q, r));
          return b;
        };
        std::vector<long double> by_class;
        std::vector<bool> known;
        const std::uint32_t inside = ((std::uint32_t{1} << len) - 1) << p;
        for (std::size_t n = 1; n <= nmax; ++n) {
          const std::size_t c = level_class(n);
          if (c >= by_class.size()) {
            by_class.resize(c + 1, 0);
            known.resize(c + 1, false);
          }
          if (!known[c]) {
            long double best = 0;
            for (std::uint32_t mask : classes[c]) {
              if (mask & ~inside) continue;
              long double s = 0;
              for (std::uint32_t rest = mask; rest;) {
                const std::size_t q = static_cast<std::size_t>(std::countr_zero(rest));
                rest &= rest - 1;
                const std::size_t limit = rest ? static_cast<std::size_t>(std::countr_zero(rest)) - 1 : e;
                s += best_from(q, limit);
              }
              best = std::max(best, s);
            }
            by_class[c] = best;
            known[c] = true;
          }
          d[n] = by_class[c];
        }
      }
      const long double child_error = len > 1 ? best_runs(p, e, error_cell) : 0;

      auto phi = [&](long double t) {
        long double s = 0, th = theta;
        for (std::size_t n = 1; n <= nmax; ++n) {
          th /= 2;
          const long double a = th * std::max(d[n], t);
          s += a * a;
        }
        return std::max(base, std::sqrt(s));
      };
      long double t = base;
      std::vector<long double> trace{t};
      long double step = 0;
      int it = 0;
      for (; it < kMaxIterations; ++it) {
        const long double next = phi(t);
        step = next - t;
        t = std::max(t, next);
        if (top) trace.push_back(t);
        if (step <= 0 || lip / (1 - lip) * step <= local / 8) break;
      }
      const long double iteration_error = lip / (1 - lip) * std::max(step, 0.0L);
      const long double rounding = 64 * LDBL_EPSILON * scale * static_cast<long double>(nmax + 4);
      const long double err = (lip * child_error + tail + rounding) / (1 - lip) + iteration_error;
      tab.v(p, e) = t;
      tab.err(p, e) = err;
      if (top) {
        out.approx = t;
        out.error_bound = err;
        out.trace = std::move(trace);
        out.levels = nmax;
        if (it == kMaxIterations && err > tol)
          throw BoundError("Z norm iteration cap reached; achieved error bound " + std::to_string(static_cast<double>(err)));
      }
    }
  }
  if (out.error_bound > tol)
    throw BoundError("Z norm tolerance unachievable; achieved error bound " +
                     std::to_string(static_cast<double>(out.error_bound)));
  out.certificate.description = "fixed point of the run recursion over " + std::to_string(out.levels) + " levels";
  out.certificate.witness.push_back(x.support());
  return out;
}

long double lower_l1_margin(const NormEngine& engine, std::span<const SparseVector> blocks, std::size_t n,
                            const FinSet& f, std::span<const Rational> coeffs) {
  if (engine.kind() != NormEngine::Kind::z) throw DomainError("lower_l1_margin needs a Z engine");
  if (n == 0) throw DomainError("level index must be positive");
  if (coeffs.size() != f.size()) throw DomainError("one coefficient per element of F is required");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].is_zero()) throw DomainError("block " + std::to_string(i + 1) + " is zero");
    if (i > 0 && blocks[i - 1].max_index() >= blocks[i].min_index())
      throw DomainError("blocks are not successive at " + std::to_string(i + 1));
  }
  std::vector<Nat> minima;
  SparseVector sum;
  long double l1 = 0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    Nat i = f[j];
    if (i == 0 || i > blocks.size()) throw DomainError("F refers to a missing block");
    const SparseVector& z = blocks[i - 1];
    const NormResult r = engine.norm(z);
    if (std::fabs(r.approx - 1) > 1e-9L) throw DomainError("block " + std::to_string(i) + " is not normalized");
    minima.push_back(z.min_index());
    sum = sum + coeffs[j] * z;
    l1 += std::fabs(to_long_double(coeffs[j]));
  }
  if (!Family::schreier(engine.z_level(n)).contains(FinSet(minima)))
    throw DomainError("block minima " + FinSet(minima).str() + " are not admissible at level " + std::to_string(n));
  const long double theta_n = std::ldexp(to_long_double(engine.vartheta()), -static_cast<int>(n));
  return engine.norm(sum).approx - theta_n * l1;
}

}  // namespace schreier
