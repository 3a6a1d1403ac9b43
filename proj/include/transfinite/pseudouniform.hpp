#pragma once

#include <optional>
#include <string>
#include <vector>

#include "transfinite/ranks.hpp"

namespace transfinite {

/// lambda_k for k >= 1: the even fundamental sequence of w^lambda.
Ordinal lambda_k(unsigned lambda, std::uint64_t k);

/// B_k = union over n of the even differences F_eta \ F_{eta+1} with
/// w^lambda * n <= eta < w^lambda * n + lambda_k, one set per lambda_k.
std::vector<PatternSet> build_Bk(const TransfiniteFamily& sep, unsigned lambda, const std::vector<Ordinal>& lambda_ks);

/// H: the even differences with w^lambda * m <= eta < w^lambda * m + lk.
PatternSet local_difference_union(const TransfiniteFamily& sep, unsigned lambda, std::uint64_t m, const Ordinal& lk);

/// The length lk + 4 family of closed sets whose even differences give H.
/// Finite lk shifts F through by two; infinite lk follows the four-branch
/// table. Throws WitnessMismatch when the result does not separate H.
TransfiniteFamily build_P_eta(const TransfiniteFamily& sep, unsigned lambda, std::uint64_t m, const Ordinal& lk,
                              const Topology& t);

struct PseudouniformCertificate {
  RankReport gamma;
  std::vector<std::string> checks;
  std::string str() const;
};

/// gamma <= w, or CertificateViolation. With `sep`, also D^n of every
/// relevant eps lies in F_{w^lambda * n} for n <= depth (InclusionViolation).
PseudouniformCertificate certify_pseudouniform(const SeqFamily& fam, const Topology& t,
                                               const TransfiniteFamily* sep = nullptr, unsigned lambda = 1,
                                               unsigned depth = 5, const Budget& budget = Budget::from_env());

struct PhiWitness {
  StepFn target;
  SeqFamily sequence;
  unsigned lambda = 1;
  /// Convergence and ranks are computed here; for xi > 1 this refines `base`.
  Topology topology;
  unsigned xi = 1;
  std::optional<Topology> base;
  /// beta(f_k) for the first few k, checked against lambda_k * w.
  std::vector<RankValue> term_beta;
  PseudouniformCertificate pseudo;
  std::vector<std::string> checks;
  std::string str() const;
};

/// The tail family on [0, w^(lambda+1)): f_k = chi_{B_k} with k = n + 1.
SeqFamily tails_phi_sequence(const SpaceDesc& space, unsigned lambda);

/// f_k = chi_{B_k} -> chi_A for A the even-difference union of the tail
/// family on [0, w^(lambda+1)) (or A empty). Checks pointwise convergence,
/// gamma <= w with D^n inside F_{w^lambda n}, and for k <= terms, m <= depth
/// D^{(lambda_k + 4) m}_{f_k} inside F_{w^lambda m} via the P families.
PhiWitness phi_generate(const PatternSet& a, const TransfiniteFamily& sep, unsigned lambda, const Topology& t,
                        unsigned terms = 4, unsigned depth = 3);

/// phi_generate in base.refine(declared, xi); the declared sets must be
/// Delta^0_xi in the base (ClassViolation).
PhiWitness phi_refined(const PatternSet& a, const TransfiniteFamily& sep, unsigned lambda, const Topology& base,
                       const std::vector<PatternSet>& declared, unsigned xi, unsigned terms = 4, unsigned depth = 3);

/// sum_i c_i f_i^k for witnesses of chi_{A_i}; target must equal sum c_i chi_{A_i}.
PhiWitness phi_step(const StepFn& target, const std::vector<std::pair<Rational, PhiWitness>>& pieces);

/// The diagonal f_n = sum_{k <= n} h^k o g^k_n for witnesses of the terms of
/// p (h^k clamps to [0, 2^-k] for k >= 1). Certified at eps on sample points.
PhiWitness phi_sum(const UniformPresentation& p, const std::vector<PhiWitness>& per_term, const Rational& eps);

/// beta(target) <= w^(lambda+1) and D^{w^lambda n}_{f,eps} inside
/// D^n_{(f_n),eps/4} for n <= depth and every relevant eps.
std::vector<std::string> check_phi_subset(const PhiWitness& w, unsigned depth = 3,
                                          const Budget& budget = Budget::from_env());

}  // namespace transfinite
