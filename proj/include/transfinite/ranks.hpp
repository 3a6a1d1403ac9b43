#pragma once

#include <optional>
#include <string>
#include <vector>

#include "transfinite/altsum.hpp"
#include "transfinite/derivative.hpp"

namespace transfinite {

/// Total order on ranks with the omega_1 marker on top.
bool rank_less(const RankValue& a, const RankValue& b);

struct RankReport {
  enum class Kind { AlphaPair, AlphaFn, Beta, GammaSeq };

  Kind kind = Kind::AlphaPair;
  RankValue value;
  /// The parameter attaining the sup: "p=.. q=.." or "eps=..".
  std::string parameter;
  IterationTrace trace;
  /// Every relevant parameter with its rank, in the order tried.
  std::vector<std::pair<std::string, RankValue>> per_parameter;

  /// gamma <= w.
  bool pseudouniform() const { return value.le(Ordinal::omega()); }
  std::string str(bool with_trace = false) const;
};

std::string_view to_string(RankReport::Kind k);

RankReport alpha_pair(const PatternSet& a, const PatternSet& b, const Topology& t, const Budget& budget = Budget::from_env());
/// sup over consecutive attained values p < q of alpha({f <= p}, {f >= q}).
RankReport alpha_fn(const StepFn& f, const Topology& t, const Budget& budget = Budget::from_env());
/// sup over the pairwise value gaps eps of rk(D_{f,eps}).
RankReport beta(const StepFn& f, const Topology& t, const Budget& budget = Budget::from_env());
RankReport gamma_seq(const SeqFamily& fam, const Topology& t, const Budget& budget = Budget::from_env());

/// Relevant epsilons of a finite value set: the distinct pairwise gaps,
/// smallest first; {1} when there is at most one value.
std::vector<Rational> relevant_eps(const std::vector<Rational>& values);

struct AlphaXiCertificate {
  unsigned xi = 1;
  Ordinal length;
  PatternSet difference_union;
  std::string str() const;
};

/// Checks that fam is a continuous decreasing Pi^0_xi family with
/// A inside the union of its even differences and B outside it.
AlphaXiCertificate alpha_xi_verify(const PatternSet& a, const PatternSet& b, const TransfiniteFamily& fam, unsigned xi,
                                   const Topology& t);

/// Witnesses for f in B_xi^lambda: either one separation family per
/// consecutive value pair (p, q), separating {f >= q} from {f <= p} in t, or
/// a refinement of t in which the same families are checked with xi = 1.
struct ClassWitness {
  std::vector<TransfiniteFamily> per_pair;
  std::optional<Topology> refined;
};

struct ClassCertificate {
  unsigned lambda = 0;
  unsigned xi = 1;
  bool via_refinement = false;
  RankValue alpha, beta;
  std::vector<AlphaXiCertificate> pairs;
  std::string str() const;
};

ClassCertificate class_membership(const StepFn& f, unsigned lambda, unsigned xi, const Topology& t, const ClassWitness& w,
                                  const Budget& budget = Budget::from_env());

/// Points whose least nonzero CNF digit is even. Dense and co-dense next to
/// every limit point, so the separation rank equals the CB rank.
PatternSet least_digit_even(const SpaceDesc& space);
/// [0, w^(lambda-1) + 1) for lambda >= 1: compact, CB rank lambda.
SpaceDesc cb_rank_space(unsigned lambda);

}  // namespace transfinite
