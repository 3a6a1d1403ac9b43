#include "transfinite/pseudouniform.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace transfinite {

namespace {

[[noreturn]] void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

// The part of zeta below w^lambda.
Ordinal remainder_below(const Ordinal& zeta, unsigned lambda) {
  std::vector<Ordinal::Term> low;
  for (const auto& t : zeta.terms()) {
    if (t.exponent < lambda) low.push_back(t);
  }
  return Ordinal::from_terms(std::move(low), kMaxDepthCeiling);
}

// The exit x + 1 = zeta + 1 as zeta, for exits that are successors.
std::optional<Ordinal> exit_zeta(const std::optional<Ordinal>& e) {
  if (!e || classify(*e) != OrdinalKind::Successor) return std::nullopt;
  return predecessor(*e);
}

Ordinal block_base(unsigned lambda, std::uint64_t m) {
  return m == 0 ? Ordinal{} : Ordinal::omega_power(lambda, m);
}

// Segments for indices [p0, p1) with eta' = src + (eta - p0) in sep.
void reindex(const TransfiniteFamily& sep, const Ordinal& p0, const Ordinal& p1, const Ordinal& src,
             std::vector<TransfiniteFamily::Segment>& out) {
  const unsigned ceil = kMaxDepthCeiling;
  const Ordinal src_end = add(src, left_subtract(p1, p0), ceil);
  Ordinal covered = p0;
  for (const auto& seg : sep.segments()) {
    const Ordinal lo = std::max(seg.from, src);
    const Ordinal hi = std::min(seg.to, src_end);
    if (!(lo < hi)) continue;
    const Formula body = rebase_index(seg.pieces.front().cell, left_subtract(lo, seg.from));
    const Ordinal from = add(p0, left_subtract(lo, src), ceil);
    const Ordinal to = add(p0, left_subtract(hi, src), ceil);
    out.push_back({from, to, {{Rational(1), body}}});
    covered = to;
  }
  if (covered < p1) out.push_back({covered, p1, {{Rational(1), Formula::falsity()}}});
}

bool is_tails(const TransfiniteFamily& sep) {
  return sep.kind() == TransfiniteFamily::Kind::Sets && sep.segments().size() == 1 && sep.length() == sep.space().bound &&
         sep.segments().front().pieces.front().cell == Formula::ge_param(Ordinal{});
}

std::vector<Ordinal> convergence_points(const TransfiniteFamily& sep, const StepFn& target) {
  std::set<Ordinal> pts;
  for (const auto& x : probe_points(sep)) pts.insert(x);
  for (const auto& p : target.pieces()) {
    for (const auto& x : p.cell.sample_points(12)) pts.insert(x);
  }
  return {pts.begin(), pts.end()};
}

std::size_t check_convergence(const SeqFamily& seq, const StepFn& target, const std::vector<Ordinal>& pts) {
  const unsigned dims = seq.space().dims();
  for (const auto& x : pts) {
    if (!seq.space().contains(x)) continue;
    const auto d = x.digits(dims);
    const std::uint64_t n0 = seq.settle_index(d);
    const Rational want = target.eval(x);
    for (const auto& v : seq.tail_values(d, n0)) {
      if (v != want) {
        fail(ErrorKind::CertificateViolation, "f_n(" + x.str() + ") takes " + to_string(v) + " for n >= " +
                                                  std::to_string(n0) + " but the target is " + to_string(want));
      }
    }
  }
  return pts.size();
}

StepFn zero_on(const SpaceDesc& space) { return StepFn::constant(space, 0); }

}  // namespace

Ordinal lambda_k(unsigned lambda, std::uint64_t k) {
  if (lambda == 0 || k == 0) throw Error(ErrorKind::InvalidArgument, "lambda_k needs lambda, k >= 1");
  return fundamental_sequence(Ordinal::omega_power(lambda), k, true);
}

std::vector<PatternSet> build_Bk(const TransfiniteFamily& sep, unsigned lambda, const std::vector<Ordinal>& lambda_ks) {
  std::vector<PatternSet> out;
  for (std::size_t i = 0; i < lambda_ks.size(); ++i) {
    const Ordinal& lk = lambda_ks[i];
    if (lk.is_zero() || !is_even(lk) || !(lk < Ordinal::omega_power(lambda))) {
      throw Error(ErrorKind::InvalidArgument, "lambda_k = " + lk.str() + " must be even, positive and below w^" +
                                                  std::to_string(lambda));
    }
    if (i > 0 && !(lambda_ks[i - 1] < lk)) throw Error(ErrorKind::InvalidArgument, "lambda_k must increase");
    out.push_back(exit_set(
        sep,
        [&](const std::optional<Ordinal>& e) {
          const auto z = exit_zeta(e);
          return z && is_even(*z) && remainder_below(*z, lambda) < lk;
        },
        {lk}));
  }
  return out;
}

PatternSet local_difference_union(const TransfiniteFamily& sep, unsigned lambda, std::uint64_t m, const Ordinal& lk) {
  const Ordinal base = block_base(lambda, m);
  const Ordinal top = add(base, lk, kMaxDepthCeiling);
  return exit_set(
      sep,
      [&](const std::optional<Ordinal>& e) {
        const auto z = exit_zeta(e);
        return z && is_even(*z) && base <= *z && *z < top;
      },
      {base, top});
}

TransfiniteFamily build_P_eta(const TransfiniteFamily& sep, unsigned lambda, std::uint64_t m, const Ordinal& lk,
                              const Topology& t) {
  if (lk.is_zero() || !is_even(lk)) throw Error(ErrorKind::InvalidArgument, "lambda_k must be even and positive");
  const unsigned ceil = kMaxDepthCeiling;
  const Ordinal base = block_base(lambda, m);
  const Ordinal two = Ordinal::finite(2);
  const Ordinal w = Ordinal::omega();
  std::vector<TransfiniteFamily::Segment> segs;
  segs.push_back({Ordinal{}, two, {{Rational(1), Formula::truth()}}});
  if (lk.is_finite()) {
    reindex(sep, two, add(lk, two, ceil), base, segs);
  } else {
    reindex(sep, two, w, base, segs);
    if (w < lk) reindex(sep, w, lk, add(base, w, ceil), segs);
    segs.push_back({lk, add(lk, two, ceil), {{Rational(1), sep.set_at(add(base, lk, ceil)).formula()}}});
  }
  const Ordinal len = add(lk, Ordinal::finite(4), ceil);
  segs.push_back({add(lk, two, ceil), len, {{Rational(1), Formula::falsity()}}});
  TransfiniteFamily p(TransfiniteFamily::Kind::Sets, sep.space(), len, std::move(segs));
  const PatternSet h = local_difference_union(sep, lambda, m, lk);
  try {
    alpha_xi_verify(h, h.complement(), p, 1, t);
  } catch (const Error& e) {
    throw Error(ErrorKind::WitnessMismatch, "P family for m = " + std::to_string(m) + ", lambda_k = " + lk.str() +
                                                " does not witness H: " + e.what());
  }
  return p;
}

std::string PseudouniformCertificate::str() const {
  std::ostringstream os;
  os << "pseudouniform: " << gamma.str();
  for (const auto& c : checks) os << "  " << c << "\n";
  return os.str();
}

PseudouniformCertificate certify_pseudouniform(const SeqFamily& fam, const Topology& t, const TransfiniteFamily* sep,
                                               unsigned lambda, unsigned depth, const Budget& budget) {
  PseudouniformCertificate out{gamma_seq(fam, t, budget), {}};
  if (!out.gamma.pseudouniform()) {
    fail(ErrorKind::CertificateViolation, "gamma = " + out.gamma.value.str() + " at " + out.gamma.parameter + " exceeds w");
  }
  out.checks.push_back("gamma " + out.gamma.value.str() + " <= w");
  if (!sep) return out;
  for (const auto& eps : relevant_eps(fam.values())) {
    const IterationTrace tr = iterate(DerivativeOp::convergence(t, fam, eps), t.whole(), budget);
    for (unsigned n = 1; n <= depth; ++n) {
      const PatternSet& d = tr.at(Ordinal::finite(n));
      const Ordinal idx = Ordinal::omega_power(lambda, n);
      const PatternSet missed = d.minus(sep->set_at(idx));
      if (!missed.is_empty()) {
        fail(ErrorKind::InclusionViolation, "D^" + std::to_string(n) + " at eps=" + to_string(eps) + " holds " +
                                                missed.some_point().str() + " outside F_" + idx.str() + "\n" + tr.log());
      }
    }
    out.checks.push_back("eps=" + to_string(eps) + ": D^n inside F_{w^" + std::to_string(lambda) + "*n} for n <= " +
                         std::to_string(depth));
  }
  return out;
}

std::string PhiWitness::str() const {
  std::ostringstream os;
  os << "phi witness, lambda " << lambda;
  if (xi > 1) os << ", xi " << xi;
  os << "\n  target " << target.str() << "\n  " << pseudo.str();
  for (std::size_t k = 0; k < term_beta.size(); ++k) os << "  beta(f_" << k + 1 << ") = " << term_beta[k].str() << "\n";
  for (const auto& c : checks) os << "  " << c << "\n";
  return os.str();
}

SeqFamily tails_phi_sequence(const SpaceDesc& space, unsigned lambda) {
  if (lambda == 0) throw Error(ErrorKind::InvalidArgument, "lambda must be at least 1");
  const Formula cut = lambda == 1 ? Formula::digit_ge_n(0, 2, 2) : Formula::digit_ge_n(lambda - 1, 1, 1);
  const Formula b = Formula::conj({Formula::digit_mod(0, 2, 0), Formula::negate(cut)});
  return SeqFamily(space, {{Rational(1), b}, {Rational(0), Formula::negate(b)}});
}

PhiWitness phi_generate(const PatternSet& a, const TransfiniteFamily& sep, unsigned lambda, const Topology& t,
                        unsigned terms, unsigned depth) {
  const SpaceDesc& space = sep.space();
  if (!(t.space() == space) || !(a.space() == space)) throw Error(ErrorKind::InvalidArgument, "spaces differ");
  PhiWitness w;
  w.lambda = lambda;
  w.topology = t;
  w.target = StepFn::characteristic(a);
  if (a.is_empty()) {
    w.sequence = SeqFamily::constant(zero_on(space));
    w.pseudo = certify_pseudouniform(w.sequence, t);
    for (unsigned k = 1; k <= terms; ++k) w.term_beta.push_back(beta(w.sequence.at(k - 1), t).value);
    w.checks.push_back("A empty: f_k = 0");
    return w;
  }
  if (!is_tails(sep) || !(space.bound == Ordinal::omega_power(lambda + 1))) {
    throw Error(ErrorKind::Unsupported, "sequence construction needs the tail family on [0, w^" +
                                            std::to_string(lambda + 1) + ")");
  }
  if (!(even_difference_union(sep) == a)) {
    throw Error(ErrorKind::WitnessMismatch, "A is not the even-difference union of the family");
  }
  w.sequence = tails_phi_sequence(space, lambda);

  std::vector<Ordinal> lks;
  for (unsigned k = 1; k <= terms; ++k) lks.push_back(lambda_k(lambda, k));
  const auto bks = build_Bk(sep, lambda, lks);
  for (unsigned k = 1; k <= terms; ++k) {
    if (!(w.sequence.at(k - 1) == StepFn::characteristic(bks[k - 1]))) {
      throw Error(ErrorKind::WitnessMismatch, "f_" + std::to_string(k) + " is not chi of B_" + std::to_string(k) + " = " +
                                                  bks[k - 1].str());
    }
  }
  w.checks.push_back("f_k = chi(B_k) for k <= " + std::to_string(terms));

  const auto n = check_convergence(w.sequence, w.target, convergence_points(sep, w.target));
  w.checks.push_back("pointwise convergence at " + std::to_string(n) + " points");

  w.pseudo = certify_pseudouniform(w.sequence, t, &sep, lambda, 5);
  const Ordinal w_pow = Ordinal::omega();
  for (const auto& eps : relevant_eps(w.sequence.values())) {
    const IterationTrace tr = iterate(DerivativeOp::convergence(t, w.sequence, eps), t.whole());
    if (!tr.at(w_pow).is_empty()) fail(ErrorKind::CertificateViolation, "D^w is not empty\n" + tr.log());
  }
  w.checks.push_back("D^w empty");

  for (unsigned k = 1; k <= terms; ++k) {
    const Ordinal& lk = lks[k - 1];
    const StepFn fk = w.sequence.at(k - 1);
    const Ordinal lk4 = add(lk, Ordinal::finite(4), kMaxDepthCeiling);
    for (unsigned m = 0; m < depth; ++m) build_P_eta(sep, lambda, m, lk, t);
    for (const auto& eps : relevant_eps(fk.values())) {
      const IterationTrace tr = iterate(DerivativeOp::oscillation(t, fk, eps), t.whole());
      for (unsigned m = 1; m <= depth; ++m) {
        const Ordinal stage = mul(lk4, Ordinal::finite(m), kMaxDepthCeiling);
        const Ordinal idx = Ordinal::omega_power(lambda, m);
        const PatternSet missed = tr.at(stage).minus(sep.set_at(idx));
        if (!missed.is_empty()) {
          fail(ErrorKind::InclusionViolation, "D^" + stage.str() + " of f_" + std::to_string(k) + " holds " +
                                                  missed.some_point().str() + " outside F_" + idx.str() + "\n" + tr.log());
        }
      }
    }
    const RankValue b = beta(fk, t).value;
    const Ordinal bound = mul(lk, Ordinal::omega(), kMaxDepthCeiling);
    if (!b.le(bound)) {
      fail(ErrorKind::CertificateViolation, "beta(f_" + std::to_string(k) + ") = " + b.str() + " > " + bound.str());
    }
    w.term_beta.push_back(b);
  }
  w.checks.push_back("P families and D^{(lambda_k+4)m} inside F_{w^lambda m} for k <= " + std::to_string(terms) +
                     ", m <= " + std::to_string(depth));
  return w;
}

PhiWitness phi_refined(const PatternSet& a, const TransfiniteFamily& sep, unsigned lambda, const Topology& base,
                       const std::vector<PatternSet>& declared, unsigned xi, unsigned terms, unsigned depth) {
  const Topology refined = base.refine(declared, xi);
  PhiWitness w = phi_generate(a, sep, lambda, refined, terms, depth);
  w.xi = xi;
  w.base = base;
  w.checks.push_back("computed in a refinement by " + std::to_string(declared.size()) + " Delta^0_" +
                     std::to_string(xi) + " sets");
  return w;
}

PhiWitness phi_step(const StepFn& target, const std::vector<std::pair<Rational, PhiWitness>>& pieces) {
  if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "no pieces");
  PhiWitness w;
  w.target = target;
  w.topology = pieces.front().second.topology;
  w.xi = pieces.front().second.xi;
  w.base = pieces.front().second.base;
  StepFn sum = zero_on(target.space());
  SeqFamily seq = SeqFamily::constant(sum);
  for (const auto& [c, p] : pieces) {
    if (!(p.topology.space() == target.space())) throw Error(ErrorKind::InvalidArgument, "piece on another space");
    if (!p.pseudo.gamma.pseudouniform()) {
      fail(ErrorKind::CertificateViolation, "piece has gamma " + p.pseudo.gamma.value.str());
    }
    w.lambda = std::max(w.lambda, p.lambda);
    sum = sum + p.target.scale(c);
    const Rational cc = c;
    seq = seq + p.sequence.map([cc](const Rational& v) { return cc * v; });
  }
  if (!(sum == target)) throw Error(ErrorKind::CertificateViolation, "sum of pieces is " + sum.str());
  w.sequence = seq;
  w.checks.push_back("gamma additive: " + std::to_string(pieces.size()) + " pseudouniform pieces");

  std::set<Ordinal> pts;
  for (const auto& p : target.pieces()) {
    for (const auto& x : p.cell.sample_points(16)) pts.insert(x);
  }
  const auto n = check_convergence(seq, target, {pts.begin(), pts.end()});
  w.checks.push_back("pointwise convergence at " + std::to_string(n) + " points");
  w.pseudo = certify_pseudouniform(seq, w.topology);
  w.checks.push_back("gamma direct: " + w.pseudo.gamma.value.str());
  for (unsigned k = 1; k <= 2; ++k) w.term_beta.push_back(beta(seq.at(k - 1), w.topology).value);
  return w;
}

PhiWitness phi_sum(const UniformPresentation& p, const std::vector<PhiWitness>& per_term, const Rational& eps) {
  if (p.terms.empty() || per_term.size() != p.terms.size()) {
    throw Error(ErrorKind::WitnessMismatch, std::to_string(p.terms.size()) + " terms but " +
                                                std::to_string(per_term.size()) + " witnesses");
  }
  if (p.tail_bound > eps) {
    fail(ErrorKind::CertificateViolation, "tail bound " + to_string(p.tail_bound) + " exceeds eps " + to_string(eps));
  }
  const SpaceDesc& space = p.terms.front().space();
  PhiWitness w;
  w.target = p.sum();
  w.topology = per_term.front().topology;
  w.xi = per_term.front().xi;
  w.base = per_term.front().base;
  SeqFamily seq = SeqFamily::constant(zero_on(space));
  const std::size_t big_k = p.terms.size();
  for (std::size_t k = 0; k < big_k; ++k) {
    const PhiWitness& pw = per_term[k];
    if (!(pw.target == p.terms[k])) {
      throw Error(ErrorKind::WitnessMismatch, "witness " + std::to_string(k) + " is for " + pw.target.str());
    }
    const auto kk = static_cast<unsigned>(k);
    SeqFamily g = pw.sequence;
    if (k >= 1) {
      if (!(clamp_hk(p.terms[k], kk) == p.terms[k])) {
        fail(ErrorKind::CertificateViolation, "term " + std::to_string(k) + " leaves [0, 2^-" + std::to_string(k) + "]");
      }
      g = g.map([kk](const Rational& v) { return clamp_hk(v, kk); });
    }
    const SeqFamily gate = SeqFamily::gated(StepFn::constant(space, 1), Formula::ge_n(k));
    seq = seq + SeqFamily::combine(g, gate, [](const Rational& x, const Rational& y) { return x * y; });
    w.lambda = std::max(w.lambda, pw.lambda);
  }
  w.sequence = seq;
  w.checks.push_back("diagonal of " + std::to_string(big_k) + " clamped terms");

  std::set<Ordinal> pts;
  for (const auto& piece : w.target.pieces()) {
    for (const auto& x : piece.cell.sample_points(16)) pts.insert(x);
  }
  const unsigned dims = space.dims();
  const Rational share = eps / Rational(static_cast<std::int64_t>(2 * big_k));
  for (const auto& x : pts) {
    const auto d = x.digits(dims);
    const std::uint64_t n0 = seq.settle_index(d);
    const auto tail = seq.tail_values(d, n0);
    for (const auto& v : tail) {
      for (const auto& u : tail) {
        if (abs(v - u) > share) {
          fail(ErrorKind::CertificateViolation, "|f_n - f_m| at " + x.str() + " exceeds eps/2K past n = " +
                                                    std::to_string(n0));
        }
      }
      if (abs(v - w.target.eval(x)) > eps) {
        fail(ErrorKind::CertificateViolation, "f_n(" + x.str() + ") is " + to_string(v) + ", target " +
                                                  to_string(w.target.eval(x)));
      }
    }
  }
  w.checks.push_back("tail estimate eps/2K = " + to_string(share) + " at " + std::to_string(pts.size()) + " points");
  w.pseudo = certify_pseudouniform(seq, w.topology);
  w.checks.push_back("gamma direct: " + w.pseudo.gamma.value.str());
  return w;
}

std::vector<std::string> check_phi_subset(const PhiWitness& w, unsigned depth, const Budget& budget) {
  const Topology& t = w.topology;
  std::vector<std::string> out;
  const Ordinal top = Ordinal::omega_power(w.lambda + 1);
  const RankReport b = beta(w.target, t, budget);
  if (!b.value.le(top)) {
    fail(ErrorKind::CertificateViolation, "beta(target) = " + b.value.str() + " > " + top.str());
  }
  out.push_back("beta(target) = " + b.value.str() + " <= " + top.str());
  for (const auto& eps : relevant_eps(w.target.values())) {
    const IterationTrace tf = iterate(DerivativeOp::oscillation(t, w.target, eps), t.whole(), budget);
    const IterationTrace ts = iterate(DerivativeOp::convergence(t, w.sequence, eps / Rational(4)), t.whole(), budget);
    for (unsigned n = 1; n <= depth; ++n) {
      const Ordinal stage = Ordinal::omega_power(w.lambda, n);
      const PatternSet missed = tf.at(stage).minus(ts.at(Ordinal::finite(n)));
      if (!missed.is_empty()) {
        fail(ErrorKind::InclusionViolation, "eps=" + to_string(eps) + ": " + missed.some_point().str() + " is in D^" +
                                                stage.str() + " of the target but not in D^" + std::to_string(n) +
                                                " of the sequence");
      }
    }
    out.push_back("eps=" + to_string(eps) + ": D^{w^" + std::to_string(w.lambda) + " n} inside D^n at eps/4, n <= " +
                  std::to_string(depth));
  }
  return out;
}

}  // namespace transfinite
