#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "transfinite/space.hpp"

namespace boost {
// Boost 1.74's mixed rational/integer equality recurses forever under C++20
// rewritten comparisons; exact non-template overloads win resolution.
inline bool operator==(const rational<std::int64_t>& a, int b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(const rational<std::int64_t>& a, long b) { return a.denominator() == 1 && a.numerator() == b; }
}  // namespace boost

namespace transfinite {

using Rational = boost::rational<std::int64_t>;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
Rational abs(const Rational& r);
/// 2^-k.
Rational pow2_inv(unsigned k);

/// A finite-valued function: distinct values on the cells of a partition of
/// the space. Pieces are kept sorted by value.
class StepFn {
 public:
  struct Piece {
    Rational value;
    PatternSet cell;
  };

  StepFn() = default;
  /// Validates the partition (PartitionViolation) and merges equal values.
  StepFn(const SpaceDesc& space, std::vector<Piece> pieces);

  static StepFn constant(const SpaceDesc& space, Rational c);
  /// v on A, 0 elsewhere.
  static StepFn characteristic(const PatternSet& a, Rational v = 1);

  const SpaceDesc& space() const { return space_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::vector<Rational> values() const;

  Rational eval(const Ordinal& x) const;
  Rational eval_digits(std::span<const std::uint64_t> digits) const;

  Rational min_value() const { return pieces_.front().value; }
  Rational max_value() const { return pieces_.back().value; }
  /// Sup norm.
  Rational norm() const;

  /// {x : pred(f(x))}.
  PatternSet where(const std::function<bool(const Rational&)>& pred) const;
  PatternSet sublevel(const Rational& c) const {
    return where([&](const Rational& v) { return v < c; });
  }

  StepFn map(const std::function<Rational(const Rational&)>& fn) const;
  /// Pointwise combination on the common refinement.
  static StepFn combine(const StepFn& a, const StepFn& b,
                        const std::function<Rational(const Rational&, const Rational&)>& op);

  StepFn operator+(const StepFn& o) const;
  StepFn operator-(const StepFn& o) const;
  StepFn scale(const Rational& c) const;
  StepFn sup_with_const(const Rational& c) const;
  StepFn pointwise_max(const StepFn& o) const;
  StepFn restrict_to(const PatternSet& a) const;  // f on A, 0 elsewhere

  bool operator==(const StepFn& o) const;

  SExpr to_sexpr() const;
  std::string str() const { return to_string(to_sexpr()); }

 private:
  SpaceDesc space_;
  std::vector<Piece> pieces_;
};

/// sup norm of a - b.
Rational distance(const StepFn& a, const StepFn& b);

/// Oscillation of f at x relative to F: the spread of the values whose cells
/// meet F arbitrarily close to x.
Rational oscillation(const StepFn& f, const Ordinal& x, const PatternSet& F, const Topology& t);

/// Least xi in {1, 2} with every {f < c} in Sigma^0_xi.
unsigned semi_borel_class(const StepFn& f, const Topology& t);
inline bool usc_check(const StepFn& f, const Topology& t) { return semi_borel_class(f, t) == 1; }

/// h^k o g with h^k(x) = min(max(x, 0), 2^-k).
StepFn clamp_hk(const StepFn& g, unsigned k);
Rational clamp_hk(const Rational& v, unsigned k);

/// A sequence (f_n) of step functions given by pieces whose cells may use the
/// n-leaves of Formula. Membership of a fixed point is eventually periodic in
/// n with period period(); `stable_from()` bounds the n-constant leaves.
class SeqFamily {
 public:
  struct Piece {
    Rational value;
    Formula cell;
  };

  SeqFamily() = default;
  SeqFamily(const SpaceDesc& space, std::vector<Piece> pieces);

  static SeqFamily constant(const StepFn& f);
  /// The pieces of f, each cell conjoined with `gate`; value 0 elsewhere.
  static SeqFamily gated(const StepFn& f, const Formula& gate);

  const SpaceDesc& space() const { return space_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::uint64_t period() const { return period_; }
  std::uint64_t stable_from() const { return stable_from_; }
  /// Digit shape of all n-free constants in the cells.
  const std::vector<DigitShape>& shape() const { return shape_; }
  std::vector<Rational> values() const;

  StepFn at(std::uint64_t n) const;
  Rational eval(std::span<const std::uint64_t> digits, std::uint64_t n) const;
  /// Below this n the value at `digits` may still change for a non-periodic reason.
  std::uint64_t settle_index(std::span<const std::uint64_t> digits) const;
  /// Values f_m(x) for m >= n (exact, finite).
  std::vector<Rational> tail_values(std::span<const std::uint64_t> digits, std::uint64_t n) const;
  /// Smallest m >= n with pieces constant on [m, m') up to period, listed in order.
  std::vector<std::uint64_t> breakpoints(std::span<const std::uint64_t> digits, std::uint64_t from) const;

  SeqFamily map(const std::function<Rational(const Rational&)>& fn) const;
  static SeqFamily combine(const SeqFamily& a, const SeqFamily& b,
                           const std::function<Rational(const Rational&, const Rational&)>& op);
  SeqFamily operator+(const SeqFamily& o) const;

  SExpr to_sexpr(const std::string& name) const;

 private:
  void validate() const;

  SpaceDesc space_;
  std::vector<Piece> pieces_;
  std::uint64_t period_ = 1;
  std::uint64_t stable_from_ = 0;
  std::vector<DigitShape> shape_;
};

/// f = sum_k terms[k] up to tail_bound, with ||terms[k]|| <= 2^-k for k >= 1.
/// `base` records inf f; it is already folded into terms[0].
struct UniformPresentation {
  Rational base;
  std::vector<StepFn> terms;
  Rational tail_bound;

  Rational partial_sum(const Ordinal& x, std::size_t upto) const;
  Rational eval(const Ordinal& x) const { return partial_sum(x, terms.size()); }
  StepFn sum() const;
};

enum class ShiftPolicy {
  WhenNeeded,  // shift only when the approximations are not already increasing
  Always,
};

struct MonotonizeOptions {
  bool strict = true;  // enforce the 2^-(k+5) input and 2^-(k+2) shifted bounds
  ShiftPolicy shift = ShiftPolicy::WhenNeeded;
};

/// Turns uniform approximations f^k of target into a presentation
/// g^0 + g^1 + ... with non-negative differences. Throws CertificateViolation.
UniformPresentation monotonize_and_diff(const StepFn& target, const std::vector<StepFn>& approx,
                                        const MonotonizeOptions& opts = {});

}  // namespace transfinite
