#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "transfinite/functions.hpp"
#include "transfinite/oracle.hpp"
#include "transfinite/space.hpp"

namespace transfinite {

struct SeparationDeriv {
  PatternSet a, b;
};
struct OscDeriv {
  StepFn f;
  Rational eps;
};
struct ConvDeriv {
  SeqFamily fam;
  Rational eps;
};
struct CantorBendixson {};

/// One of the derivative operators on closed sets, bound to a topology.
class DerivativeOp {
 public:
  using Variant = std::variant<SeparationDeriv, OscDeriv, ConvDeriv, CantorBendixson>;

  DerivativeOp(Topology t, Variant v);

  static DerivativeOp separation(const Topology& t, PatternSet a, PatternSet b);
  static DerivativeOp oscillation(const Topology& t, StepFn f, Rational eps);
  static DerivativeOp convergence(const Topology& t, SeqFamily fam, Rational eps);
  static DerivativeOp cantor_bendixson(const Topology& t);

  const Topology& topology() const { return t_; }
  const Variant& variant() const { return v_; }
  std::string describe() const;

  /// D(F) for closed F.
  PatternSet apply(const PatternSet& f) const;

 private:
  PatternSet apply_convergence(const ConvDeriv& c, const PatternSet& f) const;

  Topology t_;
  Variant v_;
};

struct Budget {
  std::size_t successor_steps = 10000;
  std::size_t limit_jumps = 100;

  /// Defaults overridden by TRANSFINITE_BUDGET ("steps" or "steps:limits").
  static Budget from_env();
};

/// Rank value: an ordinal, or the omega_1 marker of a nonempty fixpoint.
struct RankValue {
  std::optional<Ordinal> value;

  bool stabilized() const { return value.has_value(); }
  std::string str() const { return value ? value->str() : "w1"; }
  /// Comparison treating the omega_1 marker as larger than every ordinal.
  bool le(const Ordinal& bound) const { return value && *value <= bound; }
  friend bool operator==(const RankValue&, const RankValue&) = default;
};

struct TraceStage {
  Ordinal index;
  PatternSet set;
};

/// Stages D^0(F0), D^1(F0), ... up to the empty set or a nonempty fixpoint.
struct IterationTrace {
  std::vector<TraceStage> stages;
  RankValue rank;
  bool fixpoint = false;
  std::size_t budget_used = 0;

  /// D^theta(F0) for any theta; stages past the last one repeat it.
  const PatternSet& at(const Ordinal& theta) const;
  /// `stage <ordinal> set <pattern>` lines followed by the rank.
  std::string log() const;
};

/// Iterates D from F0. Successor stages strictly decrease until they reach
/// the empty set or a fixpoint; on these spaces that happens after at most
/// dims + 2 steps, so no limit stage is ever reached before stabilization.
IterationTrace iterate(const DerivativeOp& d, const PatternSet& f0, const Budget& budget = Budget::from_env());

/// rk(D): the rank from the whole space.
RankValue rank(const DerivativeOp& d, const Budget& budget = Budget::from_env());

/// Brute-force D(F) on an oracle space. Sequence families are sampled on a
/// fixed window, so their n-leaves must use small constants (a, b < 8).
OracleSet oracle_apply(const DerivativeOp& d, const OracleSet& f);

struct OracleTrace {
  std::vector<OracleSet> stages;
  RankValue rank;
  bool fixpoint = false;
};
OracleTrace oracle_iterate(const DerivativeOp& d, const OracleSet& f0, std::size_t max_steps = 64);

}  // namespace transfinite
