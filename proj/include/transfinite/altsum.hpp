#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transfinite/functions.hpp"
#include "transfinite/space.hpp"

namespace transfinite {

/// A transfinite sequence (F_eta) or (f_eta), eta < length, given by finitely
/// many segments [from, to). Inside a segment the bodies may use the index
/// leaves ge-param / lt-param, which read s = eta - from.
class TransfiniteFamily {
 public:
  enum class Kind { Sets, Functions };

  struct Piece {
    Rational value;
    Formula cell;
  };
  struct Segment {
    Ordinal from, to;
    std::vector<Piece> pieces;  // sets: one piece {1, body}
  };
  /// eta -> value at a fixed point: `value` on [start, next start).
  struct Step {
    Ordinal start;
    Rational value;
  };

  TransfiniteFamily() = default;
  TransfiniteFamily(Kind kind, SpaceDesc space, Ordinal length, std::vector<Segment> segments);

  static TransfiniteFamily sets(const SpaceDesc& space, const Ordinal& length,
                                std::vector<std::pair<Ordinal, Formula>> starts);
  /// Closed sets F_0, ..., F_{k-1}, one segment each.
  static TransfiniteFamily finite_sets(const std::vector<PatternSet>& sets);
  /// F_eta = {x >= eta}, eta < bound of the space.
  static TransfiniteFamily tails(const SpaceDesc& space);
  /// Sum of c_i f^i_eta; shorter families are padded with zeros.
  static TransfiniteFamily linear(const std::vector<std::pair<Rational, TransfiniteFamily>>& terms);

  Kind kind() const { return kind_; }
  const SpaceDesc& space() const { return space_; }
  const Ordinal& length() const { return length_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// The segment holding eta, or nullptr past the end.
  const Segment* segment_of(const Ordinal& eta) const;
  PatternSet set_at(const Ordinal& eta) const;
  StepFn fn_at(const Ordinal& eta) const;
  Rational value(const Ordinal& x, const Ordinal& eta) const;
  /// eta -> f_eta(x) over [0, length) as a step function of eta.
  std::vector<Step> profile(const Ordinal& x) const;

  /// Appends zeros (empty sets) up to `length`.
  TransfiniteFamily padded(const Ordinal& length) const;
  TransfiniteFamily scaled(const Rational& c) const;
  /// The same sets seen as characteristic functions.
  TransfiniteFamily as_functions() const;

  SExpr to_sexpr() const;
  static TransfiniteFamily from_sexpr(const SpaceDesc& space, const SExpr& e);

 private:
  Kind kind_ = Kind::Sets;
  SpaceDesc space_;
  Ordinal length_;
  std::vector<Segment> segments_;
};

/// Replaces the offsets o of index leaves by o + delta.
Formula rebase_index(const Formula& f, const Ordinal& delta);

/// Points used to check families: small digit combinations, index-leaf
/// offsets and their neighbours.
std::vector<Ordinal> probe_points(const TransfiniteFamily& fam, std::size_t extra = 0);
/// Indices used to check families symbolically.
std::vector<Ordinal> probe_indices(const TransfiniteFamily& fam);

/// Throws VerificationError unless fam is a decreasing, continuous family of
/// sets with F_0 = X and empty intersection at a limit length.
void verify_set_family(const TransfiniteFamily& fam, const Topology& t);

/// A verified decreasing uniformly bounded sequence of semi-Borel class xi.
struct DUSBSeq {
  TransfiniteFamily fam;
  unsigned xi = 1;
  Topology topology;
  std::vector<std::string> certs;
};

/// With `vanishing` false the limit-length vanishing cert is skipped (the
/// primed class of sequences that need not tend to 0).
DUSBSeq verify_dusb(const TransfiniteFamily& fam, const Topology& t, unsigned xi, bool vanishing = true);

/// sum*_{eta < theta} (-1)^eta f_eta(x).
Rational altsum_eval(const TransfiniteFamily& fam, const Ordinal& x, const Ordinal& theta);
inline Rational altsum_eval(const DUSBSeq& s, const Ordinal& x, const Ordinal& theta) {
  return altsum_eval(s.fam, x, theta);
}

/// x -> sum*_{eta < theta} (-1)^eta f_eta(x) as a step function.
StepFn altsum_fn(const TransfiniteFamily& fam, const Ordinal& theta);
/// x -> inf_eta f_eta(x), the last value of each profile.
StepFn infimum_fn(const TransfiniteFamily& fam);

/// Least eta with x not in F_eta; nullopt if x never leaves.
std::optional<Ordinal> exit_index(const TransfiniteFamily& sets, const Ordinal& x);
/// 1 if x leaves at zeta + 1 with zeta even. ExitNotFound if x never leaves a
/// limit-length family.
int exit_parity_eval(const TransfiniteFamily& sets, const Ordinal& x);

/// {x : pred(exit index of x)} as a pattern (nullopt: x never leaves). The
/// predicate must only look at the exit through the digits of the family's
/// offsets, segment bounds and `extra`; cells are checked on three points
/// each and disagreement throws Undecidable.
PatternSet exit_set(const TransfiniteFamily& sets, const std::function<bool(const std::optional<Ordinal>&)>& pred,
                    const std::vector<Ordinal>& extra = {});
/// The union of the even differences F_zeta \ F_{zeta+1}.
PatternSet even_difference_union(const TransfiniteFamily& sets);

DUSBSeq build_char_decomposition(const TransfiniteFamily& sets, const Topology& t);

/// Levels of a non-negative step function: f = sum d_i chi_{f >= v_i}.
struct Level {
  Rational value, weight;
  PatternSet set;
};
std::vector<Level> levels(const StepFn& f);

/// f_eta = sum_i d_i chi(F^i_eta) over the positive levels of f. `per_level`
/// holds one separation witness per positive level, in increasing order.
DUSBSeq build_step_decomposition(const StepFn& f, const std::vector<TransfiniteFamily>& per_level, const Topology& t);

/// Witness for chi_A by peeling the separation derivative of (A, X \ A):
/// each stage removes the points locally in A, then those locally outside.
TransfiniteFamily layered_witness(const PatternSet& a, const Topology& t);

struct LazyDUSB {
  UniformPresentation presentation;
  std::vector<DUSBSeq> terms;
};

LazyDUSB build_uniform_decomposition(const UniformPresentation& p, const std::vector<DUSBSeq>& per_term);

struct Interval {
  Rational lo, hi;
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};
Interval eval_to_precision(const LazyDUSB& l, const Ordinal& x, const Ordinal& theta, const Rational& eps);

struct LengthCertificate {
  unsigned lambda = 0;
  unsigned xi = 1;
  Rational constant;
  Ordinal length;
  std::size_t points_checked = 0;
  std::size_t indices_checked = 0;
  std::string str() const;
};

/// Checks f = c + sum* witness and 0 <= f - c - sum*_{<theta} <= f_theta at
/// even theta. Throws ResidualViolation.
LengthCertificate length_upper_certificate(const StepFn& f, const DUSBSeq& witness, unsigned lambda,
                                           const Rational& c = 0);

}  // namespace transfinite
