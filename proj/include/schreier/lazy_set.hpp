#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "schreier/finset.hpp"

namespace schreier {

inline constexpr std::size_t kDefaultProbeLimit = 1'000'000;

// Infinite strictly increasing sequence of positive integers given by a pure
// generator. Values are memoised in a prefix cache shared by all copies; the
// cache is guarded so copies can be probed from several threads.
class LazySet {
 public:
  // index is 1-based; nullopt signals that the value is not representable
  using Generator = std::function<std::optional<Nat>(std::size_t index)>;

  LazySet(Generator generator, std::string description, std::size_t probe_limit = kDefaultProbeLimit);

  static LazySet naturals(std::size_t probe_limit = kDefaultProbeLimit);
  static LazySet arithmetic(Nat start, Nat step, std::size_t probe_limit = kDefaultProbeLimit);
  static LazySet geometric(Nat start, Nat ratio, std::size_t probe_limit = kDefaultProbeLimit);
  // prefix, then continue from its last element with tail_step
  static LazySet with_prefix(std::vector<Nat> prefix, Nat tail_step, std::size_t probe_limit = kDefaultProbeLimit);
  // Parses "naturals", "arith:START:STEP", "geom:START:RATIO", "list:a,b,c:STEP".
  static LazySet parse(const std::string& text, std::size_t probe_limit = kDefaultProbeLimit);

  Nat at(std::size_t index) const;
  Nat operator[](std::size_t index) const { return at(index); }
  std::vector<Nat> prefix(std::size_t count) const;
  // 1-based index of value, probing until the sequence passes it.
  std::optional<std::size_t> index_of(Nat value) const;
  bool contains(Nat value) const { return index_of(value).has_value(); }

  // Sequence with the first k elements removed.
  LazySet drop(std::size_t k) const;
  // Sequence with the listed values removed.
  LazySet minus(const FinSet& removed) const;
  // head followed by the elements of this sequence with index > tail_from.
  LazySet splice(const FinSet& head, std::size_t tail_from) const;
  LazySet with_probe_limit(std::size_t probe_limit) const;

  // Largest index probed so far.
  std::size_t consumed() const;
  std::size_t probe_limit() const;
  const std::string& description() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace schreier
