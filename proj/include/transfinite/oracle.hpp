#pragma once

#include <cstdint>
#include <vector>

#include "transfinite/space.hpp"

namespace transfinite {

/// Explicit subset of a small space [0, w*m + k): each of the m full blocks
/// {w*b + d} stores a prefix of kPrefix bits followed by one period of
/// kPeriod bits, and the trailing k points are stored bit by bit. All
/// topology here is brute force over that data.
class OracleSet {
 public:
  static constexpr std::uint64_t kPrefix = 24;
  static constexpr std::uint64_t kPeriod = 24;

  static bool supports(const SpaceDesc& space) { return space.bound.width() <= 2; }

  explicit OracleSet(const SpaceDesc& space);

  /// Direct evaluation of the formula at every stored position.
  static OracleSet from_formula(const SpaceDesc& space, const Formula& f);
  static OracleSet from_pattern(const PatternSet& s);
  PatternSet to_pattern() const;

  const SpaceDesc& space() const { return space_; }
  std::uint64_t blocks() const { return blocks_; }
  std::uint64_t trailing() const { return trail_.size(); }

  bool contains(const Ordinal& x) const;
  bool contains(std::uint64_t block, std::uint64_t d) const;
  void set(std::uint64_t block, std::uint64_t d, bool v);
  /// Whether block b has points arbitrarily far out (b < blocks()).
  bool unbounded_in(std::uint64_t block) const;
  bool empty() const;

  OracleSet unite(const OracleSet& o) const;
  OracleSet intersect(const OracleSet& o) const;
  OracleSet complement() const;

  OracleSet accumulation() const;
  OracleSet closure() const { return unite(accumulation()); }
  OracleSet cb_derivative() const { return intersect(accumulation()); }
  /// Accumulation inside each cell of a partition.
  OracleSet accumulation(const std::vector<OracleSet>& cells) const;
  OracleSet closure(const std::vector<OracleSet>& cells) const { return unite(accumulation(cells)); }

  /// Calls fn(block, d, x) for every stored position; for full blocks d runs
  /// over the prefix and one period.
  template <class Fn>
  void for_each_position(Fn&& fn) const;

  friend bool operator==(const OracleSet& a, const OracleSet& b) {
    return a.space_ == b.space_ && a.full_ == b.full_ && a.trail_ == b.trail_;
  }

 private:
  SpaceDesc space_;
  std::uint64_t blocks_ = 0;
  std::vector<std::vector<std::uint8_t>> full_;  // blocks_ x (kPrefix + kPeriod)
  std::vector<std::uint8_t> trail_;
};

template <class Fn>
void OracleSet::for_each_position(Fn&& fn) const {
  for (std::uint64_t b = 0; b < blocks_; ++b) {
    for (std::uint64_t d = 0; d < kPrefix + kPeriod; ++d) fn(b, d);
  }
  for (std::uint64_t d = 0; d < trail_.size(); ++d) fn(blocks_, d);
}

}  // namespace transfinite
