#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transfinite/ordinal.hpp"
#include "transfinite/sexpr.hpp"

namespace transfinite {

/// Syntax tree of a set description. Leaves constrain CNF digits of a point x;
/// three leaf kinds mention a natural parameter n (sequence families) and two
/// mention a transfinite index parameter (set families).
class Formula {
 public:
  enum class Op {
    True,
    False,
    And,
    Or,
    Not,
    DigitEq,   // c_i == v
    DigitGe,   // c_i >= v
    DigitMod,  // c_i == r (mod m)
    OrdLt,     // x < b
    OrdGe,     // x >= b
    GeParam,   // x >= off + s   (s = index shift inside a family segment)
    LtParam,   // x <  off + s
    DigitGeN,  // c_i >= a*n + b
    ModN,      // n == r (mod m)
    GeN,       // n >= c
  };

  struct Node {
    Op op;
    unsigned digit = 0;
    std::uint64_t a = 0, b = 0;  // (v) | (m, r) | (a, b) | (c)
    Ordinal ord;
    std::vector<Formula> kids;
  };

  Formula();  // True

  static Formula truth();
  static Formula falsity();
  static Formula digit_eq(unsigned i, std::uint64_t v);
  static Formula digit_ge(unsigned i, std::uint64_t v);
  static Formula digit_lt(unsigned i, std::uint64_t v) { return negate(digit_ge(i, v)); }
  static Formula digit_mod(unsigned i, std::uint64_t m, std::uint64_t r);
  static Formula ord_lt(Ordinal b);
  static Formula ord_ge(Ordinal b);
  static Formula ge_param(Ordinal offset);
  static Formula lt_param(Ordinal offset);
  static Formula digit_ge_n(unsigned i, std::uint64_t a, std::uint64_t b);
  static Formula mod_n(std::uint64_t m, std::uint64_t r);
  static Formula ge_n(std::uint64_t c);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula negate(Formula f);

  Op op() const { return node_->op; }
  const Node& node() const { return *node_; }

  bool has_index_param() const;
  bool has_n_param() const;
  bool is_closed() const { return !has_index_param() && !has_n_param(); }

  /// Evaluates on a point given by its digits (missing digits are 0).
  /// Parameterised leaves need `shift` / `n`; a missing binding throws.
  bool eval(std::span<const std::uint64_t> digits, const std::optional<Ordinal>& shift = std::nullopt,
            const std::optional<std::uint64_t>& n = std::nullopt, unsigned ceiling = kMaxDepthCeiling) const;
  bool eval(const Ordinal& x) const;

  /// Replaces index-parameter leaves by OrdGe/OrdLt(off + shift).
  Formula bind_index(const Ordinal& shift, unsigned ceiling = kMaxDepthCeiling) const;
  /// Replaces n-leaves by constants for the given n.
  Formula bind_n(std::uint64_t n) const;

  /// Offsets of index-parameter leaves (for breakpoint analysis).
  void collect_index_offsets(std::vector<Ordinal>& out) const;

  SExpr to_sexpr() const;
  std::string str() const { return to_string(to_sexpr()); }
  /// Parses the set syntax; ordinals in leaves are parsed with `ceiling`.
  static Formula from_sexpr(const SExpr& e, unsigned ceiling = kDefaultDepthCeiling);
  static Formula parse(std::string_view text, unsigned ceiling = kDefaultDepthCeiling);

  friend bool operator==(const Formula& x, const Formula& y);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

/// Per-digit thresholds and moduli a formula's leaves look at.
struct DigitShape {
  std::uint64_t threshold = 1;  // values below are told apart individually
  std::uint64_t modulus = 1;    // values at or above are told apart mod this
  friend bool operator==(const DigitShape&, const DigitShape&) = default;
};

/// Widens `shape` (one entry per digit) so that every closed leaf of `f` is
/// constant on each class. n-leaves contribute their constant offsets.
void accumulate_shape(const Formula& f, std::vector<DigitShape>& shape);

}  // namespace transfinite
