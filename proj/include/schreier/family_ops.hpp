#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schreier/family.hpp"
#include "schreier/rational.hpp"

namespace schreier {

inline constexpr Nat kDefaultEnumerationBound = 24;

bool is_member(const FinSet& e, const Family& f);
// E in F and E u {max E + 1} not in F.
bool is_maximal(const FinSet& e, const Family& f);

struct Segment {
  FinSet elements;
  std::size_t first_index = 0;  // 1-based position in M of the first element
  std::size_t consumed = 0;     // elements of M read, including the rejected probe
};

// Longest initial segment of M (after skipping `offset` elements) lying in F.
Segment initial_max_segment(const LazySet& m, const Family& f, std::size_t offset = 0);

struct PartitionBlock {
  FinSet elements;  // M_{F,n}
  std::size_t first_index = 0;
  std::size_t last_index = 0;  // indices [first, last] form M^{-1}_{F,n}
  FinSet indices() const { return FinSet::interval(first_index, last_index); }
};

// Canonical partition of M into successive maximal F-sets.
std::vector<PartitionBlock> partition_prefix(const LazySet& m, const Family& f, std::size_t count);
PartitionBlock partition(const LazySet& m, const Family& f, std::size_t n);

// F restricted to subsets of {1..n}, in colex order.
std::vector<FinSet> enumerate_restriction(const Family& f, Nat n, Nat bound = kDefaultEnumerationBound);

struct RegularityReport {
  bool hereditary = true;
  bool spreading = true;
  std::size_t members = 0;
  std::string compactness = "not checked (finite truncation)";
  std::vector<std::string> counterexamples;
};

RegularityReport check_regularity(const Family& f, Nat n, Nat bound = kDefaultEnumerationBound);

struct CbIndex {
  Ordinal value;
  bool exact = true;  // false: value is an upper bound
};

CbIndex cb_symbolic(const Family& f);

// Length of the longest chain E < E u {m_1} < ... inside F with entries <= n;
// for sets that are not maximal this probes the finite rank of E.
std::uint64_t cb_probe_rank(const FinSet& e, const Family& f, Nat n);

struct WeightedMember {
  Rational value;
  FinSet witness;
};

// max over E in F, E inside the listed coordinates, of the sum of their weights.
// Weights must be non-negative; F must be hereditary.
WeightedMember max_weight_member(const Family& f, std::span<const std::pair<Nat, Rational>> weights);

}  // namespace schreier
