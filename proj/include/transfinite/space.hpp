#pragma once

#include <string>
#include <vector>

#include "transfinite/formula.hpp"
#include "transfinite/grid.hpp"
#include "transfinite/ordinal.hpp"

namespace transfinite {

/// The space [0, bound) of ordinals with the order topology. `depth` is the
/// exponent ceiling used when parsing ordinals that live in this space.
struct SpaceDesc {
  Ordinal bound;
  unsigned depth = kDefaultDepthCeiling;

  SpaceDesc() = default;
  SpaceDesc(Ordinal b, unsigned d = kDefaultDepthCeiling);

  /// Number of CNF digits a point can have.
  unsigned dims() const;
  bool compact() const { return classify(bound) == OrdinalKind::Successor; }
  bool contains(const Ordinal& x) const { return x < bound; }
  std::string str() const;

  friend bool operator==(const SpaceDesc&, const SpaceDesc&) = default;
};

/// A subset of a SpaceDesc, kept as a minimized grid clipped to the space.
class PatternSet {
 public:
  PatternSet() = default;

  static PatternSet from_formula(const SpaceDesc& space, const Formula& f);
  static PatternSet parse(const SpaceDesc& space, std::string_view text);
  static PatternSet whole(const SpaceDesc& space);
  static PatternSet none(const SpaceDesc& space);
  /// Clips and canonicalises a grid over space.dims() digits.
  static PatternSet from_grid(const SpaceDesc& space, const GridSet& g);
  static PatternSet singleton(const SpaceDesc& space, const Ordinal& x);

  const SpaceDesc& space() const { return space_; }
  const GridSet& grid() const { return grid_; }

  bool contains(const Ordinal& x) const;
  bool contains_digits(std::span<const std::uint64_t> digits) const { return grid_.contains(digits); }
  bool is_empty() const { return grid_.empty(); }
  bool subset_of(const PatternSet& o) const { return minus(o).is_empty(); }

  PatternSet unite(const PatternSet& o) const;
  PatternSet intersect(const PatternSet& o) const;
  PatternSet minus(const PatternSet& o) const;
  PatternSet complement() const;

  /// Some element, preferring small ones; throws on the empty set.
  Ordinal some_point() const;
  /// Up to `count` distinct elements drawn from different cells and residues.
  std::vector<Ordinal> sample_points(std::size_t count) const;

  Formula formula() const { return grid_.decompile(); }
  std::string str() const { return formula().str(); }

  friend bool operator==(const PatternSet& a, const PatternSet& b) {
    return a.space_ == b.space_ && a.grid_ == b.grid_;
  }

 private:
  PatternSet(SpaceDesc space, GridSet grid) : space_(std::move(space)), grid_(std::move(grid)) {}
  void check_same_space(const PatternSet& o) const;

  SpaceDesc space_;
  GridSet grid_;
};

Ordinal point_of(std::span<const std::uint64_t> digits);

/// Accumulation points of S in the order topology of S.space().
PatternSet base_accumulation(const PatternSet& s);

enum class BorelClass { Clopen, Open, Closed, Delta2, Sigma2OrAbove };
std::string_view to_string(BorelClass c);

/// A base space plus finitely many declared sets made clopen. The declared
/// sets generate a finite partition whose cells are clopen in the refinement.
class Topology {
 public:
  Topology() = default;
  explicit Topology(SpaceDesc space);

  const SpaceDesc& space() const { return space_; }
  const std::vector<PatternSet>& declared() const { return declared_; }
  const std::vector<PatternSet>& cells() const { return cells_; }
  bool is_base() const { return declared_.empty(); }

  PatternSet whole() const { return PatternSet::whole(space_); }
  PatternSet accumulation(const PatternSet& s) const;
  PatternSet closure(const PatternSet& s) const;
  PatternSet interior(const PatternSet& s) const;
  /// Non-isolated points of F (F is assumed closed).
  PatternSet cb_derivative(const PatternSet& f) const;
  bool is_closed(const PatternSet& s) const { return closure(s) == s; }
  bool is_open(const PatternSet& s) const { return is_closed(s.complement()); }
  /// The partition cell containing x.
  const PatternSet& cell_of(const Ordinal& x) const;

  BorelClass borel_class(const PatternSet& s) const;

  /// Declares `sets` clopen. Each set must be Delta^0_xi here: clopen for
  /// xi = 1, automatic for xi >= 2 in a countable space. Throws ClassViolation.
  Topology refine(const std::vector<PatternSet>& sets, unsigned xi) const;

  std::string str() const;

 private:
  SpaceDesc space_;
  std::vector<PatternSet> declared_;
  std::vector<PatternSet> cells_;
};

}  // namespace transfinite
