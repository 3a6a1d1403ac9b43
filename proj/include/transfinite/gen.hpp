#pragma once

// Small hand-rolled generators for the property tests and reproduction suites. Every test seeds its
// own engine so failures replay deterministically.

#include <cstdint>
#include <random>
#include <vector>

#include "transfinite/derivative.hpp"
#include "transfinite/formula.hpp"
#include "transfinite/functions.hpp"
#include "transfinite/ordinal.hpp"
#include "transfinite/space.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline std::uint64_t below(Engine& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

inline bool coin(Engine& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Random ordinal below ω^width with coefficients below `coef`.
inline transfinite::Ordinal ordinal(Engine& rng, unsigned width, std::uint64_t coef = 6) {
  std::vector<std::uint64_t> digits(width, 0);
  for (auto& d : digits) {
    if (coin(rng, 0.6)) d = below(rng, coef);
  }
  return transfinite::Ordinal::from_digits(digits);
}

// Random point of the space.
inline transfinite::Ordinal point(Engine& rng, const transfinite::SpaceDesc& space, std::uint64_t coef = 12) {
  for (int tries = 0; tries < 1000; ++tries) {
    auto x = ordinal(rng, space.dims(), coef);
    if (space.contains(x)) return x;
  }
  return transfinite::Ordinal{};
}

// Random leaf over the closed atom kinds with small constants.
inline transfinite::Formula leaf(Engine& rng, const transfinite::SpaceDesc& space) {
  using transfinite::Formula;
  const unsigned i = static_cast<unsigned>(below(rng, space.dims()));
  switch (below(rng, 5)) {
    case 0: return Formula::digit_eq(i, below(rng, 6));
    case 1: return Formula::digit_ge(i, 1 + below(rng, 5));
    case 2: {
      const std::uint64_t m = 2 + below(rng, 3);
      return Formula::digit_mod(i, m, below(rng, m));
    }
    case 3: return Formula::ord_lt(point(rng, space, 6));
    default: return Formula::ord_ge(point(rng, space, 6));
  }
}

inline transfinite::Formula formula(Engine& rng, const transfinite::SpaceDesc& space, int depth = 3) {
  using transfinite::Formula;
  if (depth <= 0 || coin(rng, 0.3)) return leaf(rng, space);
  switch (below(rng, 3)) {
    case 0: return Formula::conj({formula(rng, space, depth - 1), formula(rng, space, depth - 1)});
    case 1: return Formula::disj({formula(rng, space, depth - 1), formula(rng, space, depth - 1)});
    default: return Formula::negate(formula(rng, space, depth - 1));
  }
}

inline transfinite::PatternSet pattern(Engine& rng, const transfinite::SpaceDesc& space, int depth = 3) {
  return transfinite::PatternSet::from_formula(space, formula(rng, space, depth));
}

// Random nonzero bound below w^width.
inline transfinite::SpaceDesc space(Engine& rng, unsigned width, std::uint64_t coef = 4) {
  transfinite::Ordinal b;
  while (b.is_zero()) b = ordinal(rng, width, coef);
  return transfinite::SpaceDesc(b, 4);
}

// Spaces of the oracle class, bound <= w*8 + 8.
inline transfinite::SpaceDesc oracle_space(Engine& rng) {
  std::vector<std::uint64_t> d{below(rng, 9), below(rng, 9)};
  if (d[0] == 0 && d[1] == 0) d[0] = 1;
  return transfinite::SpaceDesc(transfinite::Ordinal::from_digits(d), 4);
}

// Random step function: up to four pieces carved by random patterns, values k/8 in [-1, 1].
inline transfinite::StepFn stepfn(Engine& rng, const transfinite::SpaceDesc& space, unsigned pieces = 3) {
  using namespace transfinite;
  std::vector<StepFn::Piece> out;
  PatternSet rest = PatternSet::whole(space);
  for (unsigned k = 0; k + 1 < pieces && !rest.is_empty(); ++k) {
    PatternSet cut = rest.intersect(pattern(rng, space, 2));
    out.push_back({Rational(static_cast<std::int64_t>(below(rng, 17)) - 8, 8), cut});
    rest = rest.minus(cut);
  }
  out.push_back({Rational(static_cast<std::int64_t>(below(rng, 17)) - 8, 8), rest});
  return StepFn(space, std::move(out));
}

// Leaf that may mention the sequence index n; constants stay small so the
// oracle's sampling window covers every breakpoint.
inline transfinite::Formula n_leaf(Engine& rng, const transfinite::SpaceDesc& space) {
  using transfinite::Formula;
  switch (below(rng, 5)) {
    case 0:
    case 1: return Formula::digit_ge_n(static_cast<unsigned>(below(rng, space.dims())), 1 + below(rng, 3), below(rng, 8));
    case 2: {
      const std::uint64_t m = 2 + below(rng, 2);
      return Formula::mod_n(m, below(rng, m));
    }
    case 3: return Formula::ge_n(below(rng, 8));
    default: return leaf(rng, space);
  }
}

inline transfinite::Formula n_formula(Engine& rng, const transfinite::SpaceDesc& space, int depth = 2) {
  using transfinite::Formula;
  if (depth <= 0 || coin(rng, 0.3)) return n_leaf(rng, space);
  switch (below(rng, 3)) {
    case 0: return Formula::conj({n_formula(rng, space, depth - 1), n_formula(rng, space, depth - 1)});
    case 1: return Formula::disj({n_formula(rng, space, depth - 1), n_formula(rng, space, depth - 1)});
    default: return Formula::negate(n_formula(rng, space, depth - 1));
  }
}

// Sequence family with up to three pieces cut by n-formulas.
inline transfinite::SeqFamily seqfamily(Engine& rng, const transfinite::SpaceDesc& space) {
  using namespace transfinite;
  auto value = [&] { return Rational(static_cast<std::int64_t>(below(rng, 9)), 8); };
  const Formula a = n_formula(rng, space), b = n_formula(rng, space);
  return SeqFamily(space, {{value(), a},
                           {value(), Formula::conj({Formula::negate(a), b})},
                           {value(), Formula::conj({Formula::negate(a), Formula::negate(b)})}});
}

// Base topology or one refined by a random declared set.
inline transfinite::Topology topology(Engine& rng, const transfinite::SpaceDesc& space) {
  transfinite::Topology t(space);
  if (coin(rng)) return t;
  return t.refine({pattern(rng, space, 2)}, 2);
}

// A random closed set: the closure of a random pattern.
inline transfinite::PatternSet closed(Engine& rng, const transfinite::Topology& t) {
  return t.closure(pattern(rng, t.space()));
}

// which: 0 separation, 1 oscillation, 2 convergence, 3 Cantor-Bendixson.
inline transfinite::DerivativeOp derivative_op(Engine& rng, const transfinite::Topology& t, int which) {
  using namespace transfinite;
  const SpaceDesc& sp = t.space();
  switch (which) {
    case 0: return DerivativeOp::separation(t, pattern(rng, sp), pattern(rng, sp));
    case 1: return DerivativeOp::oscillation(t, stepfn(rng, sp), Rational(1 + below(rng, 8), 8));
    case 2: return DerivativeOp::convergence(t, seqfamily(rng, sp), Rational(1 + below(rng, 8), 8));
    default: return DerivativeOp::cantor_bendixson(t);
  }
}

}  // namespace gen
