#include "transfinite/ranks.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace transfinite {

namespace {

struct Candidate {
  std::string parameter;
  DerivativeOp op;
};

RankReport sup_over(RankReport::Kind kind, const std::vector<Candidate>& cands, const Topology& t, const Budget& budget) {
  RankReport out;
  out.kind = kind;
  bool first = true;
  for (const auto& c : cands) {
    IterationTrace tr = iterate(c.op, t.whole(), budget);
    out.per_parameter.emplace_back(c.parameter, tr.rank);
    if (first || rank_less(out.value, tr.rank)) {
      out.value = tr.rank;
      out.parameter = c.parameter;
      out.trace = std::move(tr);
      first = false;
    }
  }
  return out;
}

std::string eps_name(const Rational& e) { return "eps=" + to_string(e); }

}  // namespace

bool rank_less(const RankValue& a, const RankValue& b) {
  if (!a.stabilized()) return false;
  if (!b.stabilized()) return true;
  return *a.value < *b.value;
}

std::string_view to_string(RankReport::Kind k) {
  switch (k) {
    case RankReport::Kind::AlphaPair: return "alpha";
    case RankReport::Kind::AlphaFn: return "alpha";
    case RankReport::Kind::Beta: return "beta";
    case RankReport::Kind::GammaSeq: return "gamma";
  }
  return "?";
}

std::string RankReport::str(bool with_trace) const {
  std::ostringstream os;
  os << to_string(kind) << " = " << value.str();
  if (!parameter.empty()) os << " at " << parameter;
  os << "\n";
  if (per_parameter.size() > 1) {
    for (const auto& [p, v] : per_parameter) os << "  " << p << ": " << v.str() << "\n";
  }
  if (with_trace) os << trace.log();
  return os.str();
}

std::vector<Rational> relevant_eps(const std::vector<Rational>& values) {
  std::set<Rational> gaps;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) gaps.insert(abs(values[j] - values[i]));
  }
  gaps.erase(Rational(0));
  if (gaps.empty()) return {Rational(1)};
  return {gaps.begin(), gaps.end()};
}

RankReport alpha_pair(const PatternSet& a, const PatternSet& b, const Topology& t, const Budget& budget) {
  return sup_over(RankReport::Kind::AlphaPair, {{"", DerivativeOp::separation(t, a, b)}}, t, budget);
}

RankReport alpha_fn(const StepFn& f, const Topology& t, const Budget& budget) {
  const auto vals = f.values();
  std::vector<Candidate> cands;
  if (vals.size() == 1) {
    cands.push_back({"p=" + to_string(vals[0]), DerivativeOp::separation(t, t.whole(), PatternSet::none(t.space()))});
  }
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const Rational p = vals[i], q = vals[i + 1];
    cands.push_back({"p=" + to_string(p) + " q=" + to_string(q),
                     DerivativeOp::separation(t, f.where([&](const Rational& v) { return v <= p; }),
                                              f.where([&](const Rational& v) { return v >= q; }))});
  }
  return sup_over(RankReport::Kind::AlphaFn, cands, t, budget);
}

RankReport beta(const StepFn& f, const Topology& t, const Budget& budget) {
  std::vector<Candidate> cands;
  for (const auto& e : relevant_eps(f.values())) cands.push_back({eps_name(e), DerivativeOp::oscillation(t, f, e)});
  return sup_over(RankReport::Kind::Beta, cands, t, budget);
}

RankReport gamma_seq(const SeqFamily& fam, const Topology& t, const Budget& budget) {
  std::vector<Candidate> cands;
  for (const auto& e : relevant_eps(fam.values())) cands.push_back({eps_name(e), DerivativeOp::convergence(t, fam, e)});
  return sup_over(RankReport::Kind::GammaSeq, cands, t, budget);
}

std::string AlphaXiCertificate::str() const {
  return "alpha_" + std::to_string(xi) + " <= " + length.str() + " (even differences " + difference_union.str() + ")";
}

AlphaXiCertificate alpha_xi_verify(const PatternSet& a, const PatternSet& b, const TransfiniteFamily& fam, unsigned xi,
                                   const Topology& t) {
  if (xi == 0) throw Error(ErrorKind::InvalidArgument, "xi must be at least 1");
  if (fam.kind() != TransfiniteFamily::Kind::Sets) throw Error(ErrorKind::InvalidArgument, "alpha_xi needs a family of sets");
  verify_set_family(fam, t);
  for (const auto& eta : probe_indices(fam)) {
    const PatternSet s = fam.set_at(eta);
    const BorelClass bc = t.borel_class(s);
    const bool ok = xi == 1 ? (bc == BorelClass::Clopen || bc == BorelClass::Closed) : bc != BorelClass::Sigma2OrAbove;
    if (!ok) {
      throw Error(ErrorKind::ClassViolation, "F_" + eta.str() + " = " + s.str() + " is " + std::string(to_string(bc)) +
                                                 ", not Pi^0_" + std::to_string(xi));
    }
  }
  const PatternSet u = even_difference_union(fam);
  const PatternSet missed = a.minus(u);
  if (!missed.is_empty()) {
    throw Error(ErrorKind::InclusionViolation, missed.some_point().str() + " is in A but in no even difference");
  }
  const PatternSet hit = u.intersect(b);
  if (!hit.is_empty()) {
    throw Error(ErrorKind::InclusionViolation, hit.some_point().str() + " is in B and in an even difference");
  }
  return {xi, fam.length(), u};
}

std::string ClassCertificate::str() const {
  std::ostringstream os;
  os << "class B_" << xi << "^" << lambda << (via_refinement ? " via refinement" : "") << ": alpha = " << alpha.str()
     << ", beta = " << beta.str() << " <= w^" << lambda << "\n";
  for (const auto& p : pairs) os << "  " << p.str() << "\n";
  return os.str();
}

ClassCertificate class_membership(const StepFn& f, unsigned lambda, unsigned xi, const Topology& t, const ClassWitness& w,
                                  const Budget& budget) {
  const Ordinal bound = Ordinal::omega_power(lambda);
  const Topology& topo = w.refined ? *w.refined : t;
  if (w.refined) {
    if (!(topo.space() == t.space())) throw Error(ErrorKind::InvalidArgument, "refinement lives on another space");
    for (const auto& d : topo.declared()) {
      const BorelClass bc = t.borel_class(d);
      if (xi == 1 ? bc != BorelClass::Clopen : bc == BorelClass::Sigma2OrAbove) {
        throw Error(ErrorKind::ClassViolation, "declared set " + d.str() + " is " + std::string(to_string(bc)) +
                                                   " in the base topology");
      }
    }
  }
  const unsigned check_xi = w.refined ? 1 : xi;
  const auto vals = f.values();
  const std::size_t npairs = vals.empty() ? 0 : vals.size() - 1;
  if (w.per_pair.size() != npairs) {
    throw Error(ErrorKind::WitnessMismatch,
                std::to_string(npairs) + " value pairs but " + std::to_string(w.per_pair.size()) + " witnesses");
  }
  ClassCertificate out{lambda, xi, w.refined.has_value(), {}, {}, {}};
  for (std::size_t i = 0; i < npairs; ++i) {
    const Rational p = vals[i], q = vals[i + 1];
    const auto& fam = w.per_pair[i];
    if (fam.length() > bound) {
      throw Error(ErrorKind::CertificateViolation,
                  "witness for p=" + to_string(p) + " has length " + fam.length().str() + " > w^" + std::to_string(lambda));
    }
    out.pairs.push_back(alpha_xi_verify(f.where([&](const Rational& v) { return v >= q; }),
                                        f.where([&](const Rational& v) { return v <= p; }), fam, check_xi, topo));
  }
  out.alpha = alpha_fn(f, topo, budget).value;
  out.beta = beta(f, topo, budget).value;
  if (!out.alpha.le(bound) || !out.beta.le(bound)) {
    throw Error(ErrorKind::CertificateViolation, "computed alpha " + out.alpha.str() + " / beta " + out.beta.str() +
                                                     " exceed w^" + std::to_string(lambda));
  }
  return out;
}

PatternSet least_digit_even(const SpaceDesc& space) {
  std::vector<Formula> alts;
  for (unsigned i = 0; i < space.dims(); ++i) {
    std::vector<Formula> k;
    for (unsigned j = 0; j < i; ++j) k.push_back(Formula::digit_eq(j, 0));
    k.push_back(Formula::digit_ge(i, 1));
    k.push_back(Formula::digit_mod(i, 2, 0));
    alts.push_back(Formula::conj(std::move(k)));
  }
  return PatternSet::from_formula(space, Formula::disj(std::move(alts)));
}

SpaceDesc cb_rank_space(unsigned lambda) {
  if (lambda == 0) throw Error(ErrorKind::InvalidArgument, "CB rank must be at least 1");
  const Ordinal top = Ordinal::omega_power(lambda - 1);
  return SpaceDesc(add(top, Ordinal::finite(1), kMaxDepthCeiling), std::max(kDefaultDepthCeiling, lambda + 1));
}

}  // namespace transfinite
