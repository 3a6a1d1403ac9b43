#include <sstream>

#include "suite_util.hpp"
#include "transfinite/gen.hpp"
#include "transfinite/pseudouniform.hpp"

namespace transfinite {

namespace suites {

namespace {

struct TailsFixture {
  SpaceDesc sp;
  Topology t;
  TransfiniteFamily sep;
  PatternSet a;
  explicit TailsFixture(unsigned lambda)
      : sp(Ordinal::omega_power(lambda + 1), 4), t(sp), sep(TransfiniteFamily::tails(sp)), a(even_difference_union(sep)) {}
};

const TailsFixture& tails(unsigned lambda) {
  static const TailsFixture one(1), two(2);
  return lambda == 1 ? one : two;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : "; ") + x;
  return out;
}

// Every witness the phi suites certify.
std::vector<std::pair<std::string, PhiWitness>> phi_witnesses() {
  std::vector<std::pair<std::string, PhiWitness>> out;
  const auto& one = tails(1);
  const PhiWitness w1 = phi_generate(one.a, one.sep, 1, one.t);
  out.emplace_back("chi of the evens below w^2", w1);
  out.emplace_back("empty set below w^2", phi_generate(PatternSet::none(one.sp), one.sep, 1, one.t));
  const auto& two = tails(2);
  out.emplace_back("chi of the evens below w^3", phi_generate(two.a, two.sep, 2, two.t, 3, 2));
  out.emplace_back("3 chi of the evens", phi_step(w1.target.scale(3), {{Rational(1), w1}, {Rational(2), w1}}));
  UniformPresentation p{Rational(0), {}, Rational(1, 8)};
  std::vector<PhiWitness> per;
  for (unsigned k = 0; k < 3; ++k) {
    p.terms.push_back(w1.target.scale(pow2_inv(k)));
    per.push_back(phi_step(p.terms.back(), {{pow2_inv(k), w1}}));
  }
  out.emplace_back("three geometric terms", phi_sum(p, per, Rational(1, 8)));
  return out;
}

SeqFamily settling(gen::Engine& rng, const SpaceDesc& sp) {
  auto f = gen::stepfn(rng, sp, 2), g = gen::stepfn(rng, sp, 2);
  std::vector<SeqFamily::Piece> ps;
  const Formula late = Formula::ge_n(1 + gen::below(rng, 4));
  for (const auto& p : f.pieces()) ps.push_back({p.value, Formula::conj({Formula::negate(late), p.cell.formula()})});
  for (const auto& p : g.pieces()) ps.push_back({p.value, Formula::conj({late, p.cell.formula()})});
  return SeqFamily(sp, std::move(ps));
}

// Least l with r <= w^l (l = 0 means r <= 1); nullopt past every power.
std::optional<unsigned> log_bound(const RankValue& r) {
  if (!r.stabilized()) return std::nullopt;
  if (*r.value <= Ordinal::finite(1)) return 0u;
  unsigned l = 1;
  while (Ordinal::omega_power(l) < *r.value) ++l;
  return l;
}

Ordinal power_or_one(unsigned l) { return l == 0 ? Ordinal::finite(1) : Ordinal::omega_power(l); }

}  // namespace

SuiteReport phi_supset() {
  SuiteReport r{"phi-supset", {}};
  const auto& fx = tails(1);
  std::optional<PhiWitness> w;
  run_check(r, "6", "phi_generate on the w^2 tail family", [&] {
    w = phi_generate(fx.a, fx.sep, 1, fx.t, 4, 3);
    return join(w->checks);
  });
  run_check(r, "6", "D^n of (f_k) inside F_{w n} for n <= 5", [&] {
    if (!w) mismatch("no witness");
    const auto c = certify_pseudouniform(w->sequence, fx.t, &fx.sep, 1, 5);
    return join(c.checks);
  });
  run_check(r, "6", "D^w of (f_k) is empty", [&] {
    if (!w) mismatch("no witness");
    for (const auto& eps : relevant_eps(w->sequence.values())) {
      const auto tr = iterate(DerivativeOp::convergence(fx.t, w->sequence, eps), fx.t.whole());
      expect(tr.at(Ordinal::omega()).is_empty(), "D^w at eps=" + to_string(eps) + " is not empty");
    }
    return "gamma = " + w->pseudo.gamma.value.str();
  });
  run_check(r, "6", "D^{(lambda_k+4) m} of f_k inside F_{w m} for m <= 3, k <= 4", [&] {
    if (!w) mismatch("no witness");
    std::size_t n = 0;
    for (unsigned k = 1; k <= 4; ++k) {
      const StepFn fk = w->sequence.at(k - 1);
      const Ordinal lk4 = add(lambda_k(1, k), Ordinal::finite(4));
      for (const auto& eps : relevant_eps(fk.values())) {
        const auto tr = iterate(DerivativeOp::oscillation(fx.t, fk, eps), fx.t.whole());
        for (unsigned m = 1; m <= 3; ++m) {
          const PatternSet& d = tr.at(mul(lk4, Ordinal::finite(m)));
          expect(d.subset_of(fx.sep.set_at(Ordinal::omega_power(1, m))), "k=" + std::to_string(k) + " m=" + std::to_string(m));
          ++n;
        }
      }
    }
    std::string betas;
    for (const auto& b : w->term_beta) betas += b.str() + " ";
    return std::to_string(n) + " containments, beta(f_k) = " + betas;
  });
  run_check(r, "", "phi_generate on the w^3 tail family", [] {
    const auto& f3 = tails(2);
    return join(phi_generate(f3.a, f3.sep, 2, f3.t, 3, 2).checks);
  });
  return r;
}

SuiteReport phi_subset() {
  SuiteReport r{"phi-subset", {}};
  std::vector<std::pair<std::string, PhiWitness>> ws;
  run_check(r, "7", "certified witnesses", [&] {
    ws = phi_witnesses();
    return std::to_string(ws.size()) + " witnesses";
  });
  for (const auto& [name, w] : ws) {
    run_check(r, "7", name, [&, &w = w] { return join(check_phi_subset(w, 3)); });
  }
  return r;
}

SuiteReport xi_reduction() {
  SuiteReport r{"xi-reduction", {}};
  const SpaceDesc sp(Ordinal::omega_power(2), 4);
  const Topology base(sp);
  const PatternSet succ = PatternSet::parse(sp, "(ge 0 1)");
  const PatternSet lim = succ.complement();
  const Topology refined = base.refine({succ}, 2);
  const StepFn f = StepFn::characteristic(succ);
  run_check(r, "8", "f is class 2 and not USC in the base, USC after the refinement", [&] {
    expect(!usc_check(f, base), "f is USC in the base");
    expect(semi_borel_class(f, base) == 2, "f is not semi-Borel class 2");
    expect(usc_check(f, refined), "f is not USC in the refinement");
    return "refined by " + succ.str();
  });
  const TransfiniteFamily fam(TransfiniteFamily::Kind::Functions, sp, Ordinal::finite(1),
                              {{Ordinal{}, Ordinal::finite(1), {{Rational(1), succ.formula()}, {Rational(0), lim.formula()}}}});
  run_check(r, "8", "DUSB_2 witness verifies as DUSB_1 in the refinement", [&] {
    (void)verify_dusb(fam, base, 2);
    bool rejected = false;
    try {
      (void)verify_dusb(fam, base, 1);
    } catch (const Error&) {
      rejected = true;
    }
    expect(rejected, "the witness is already DUSB_1 in the base");
    (void)verify_dusb(fam, refined, 1);
    expect(altsum_fn(fam, fam.length()) == f, "the witness does not sum to f");
    return std::string("length 1");
  });
  run_check(r, "8", "class certificates agree", [&] {
    const TransfiniteFamily sepfam = TransfiniteFamily::finite_sets({PatternSet::whole(sp), lim});
    const auto via_base = class_membership(f, 1, 2, base, {{sepfam}, refined});
    const auto direct = class_membership(f, 1, 1, refined, {{sepfam}, std::nullopt});
    expect(via_base.alpha == direct.alpha && via_base.beta == direct.beta, "ranks differ");
    expect(via_base.pairs.size() == direct.pairs.size() && via_base.pairs[0].str() == direct.pairs[0].str(),
           "separation certificates differ");
    return "alpha " + direct.alpha.str() + ", beta " + direct.beta.str();
  });
  run_check(r, "8", "phi certificates agree", [&] {
    const auto& fx = tails(1);
    const auto xi2 = phi_refined(fx.a, fx.sep, 1, base, {succ}, 2, 2, 2);
    const auto xi1 = phi_generate(fx.a, fx.sep, 1, refined, 2, 2);
    expect(xi2.pseudo.gamma.value == xi1.pseudo.gamma.value, "gamma differs");
    expect(xi2.pseudo.checks == xi1.pseudo.checks, "pseudouniform checks differ");
    expect(xi2.term_beta == xi1.term_beta, "term betas differ");
    expect(check_phi_subset(xi2) == check_phi_subset(xi1), "subset checks differ");
    return "gamma " + xi1.pseudo.gamma.value.str();
  });
  return r;
}

SuiteReport lemmas() {
  SuiteReport r{"lemmas", {}};
  run_check(r, "9", "gamma is additive", [] {
    gen::Engine rng(5150);
    int pairs = 0;
    for (int i = 0; i < 400 && pairs < 50; ++i) {
      SpaceDesc sp = gen::space(rng, 2, 3);
      Topology t = gen::topology(rng, sp);
      auto f = gen::coin(rng) ? settling(rng, sp) : gen::seqfamily(rng, sp);
      auto g = gen::coin(rng) ? settling(rng, sp) : gen::seqfamily(rng, sp);
      const auto lf = log_bound(gamma_seq(f, t).value), lg = log_bound(gamma_seq(g, t).value);
      if (!lf || !lg) continue;
      ++pairs;
      const unsigned l = std::max(*lf, *lg);
      const auto s = gamma_seq(f + g, t).value;
      expect(s.le(power_or_one(l)), "gamma of the sum is " + s.str() + " > " + power_or_one(l).str());
    }
    expect(pairs == 50, "only " + std::to_string(pairs) + " pairs with a bounded rank");
    return std::string("50 pairs");
  });
  run_check(r, "9", "beta(g o f) <= beta(f)", [] {
    gen::Engine rng(6060);
    for (int i = 0; i < 100; ++i) {
      SpaceDesc sp = gen::space(rng, 3, 3);
      Topology t = gen::topology(rng, sp);
      auto f = gen::stepfn(rng, sp, 4);
      StepFn g;
      if (i % 2 == 0) {
        g = clamp_hk(f, static_cast<unsigned>(gen::below(rng, 4)));
      } else {
        const Rational a(static_cast<std::int64_t>(gen::below(rng, 7)) - 3, 2), b(static_cast<std::int64_t>(gen::below(rng, 5)), 4);
        g = f.map([&](const Rational& v) { return a * v + b; });
      }
      expect(!rank_less(beta(f, t).value, beta(g, t).value), "beta grows for " + f.str());
    }
    return std::string("100 compositions");
  });
  run_check(r, "9", "derivatives of functions", [] {
    gen::Engine rng(4101);
    const std::vector<Ordinal> stages = {Ordinal::finite(0), Ordinal::finite(1), Ordinal::finite(2),  Ordinal::finite(3),
                                         Ordinal::finite(5), Ordinal::omega(),   Ordinal::parse("w+1"), Ordinal::parse("w*2"),
                                         Ordinal::parse("w*3")};
    for (int i = 0; i < 20; ++i) {
      auto sp = gen::space(rng, 3);
      Topology t = gen::coin(rng) ? Topology(sp) : gen::topology(rng, sp);
      auto f = gen::stepfn(rng, sp, 3);
      const Rational eps = relevant_eps(f.values()).back();
      auto u = t.interior(gen::pattern(rng, sp));
      auto ff = gen::coin(rng, 0.3) ? t.whole() : t.closure(gen::pattern(rng, sp));
      auto g = f + StepFn::characteristic(gen::pattern(rng, sp), eps / Rational(4)) +
               StepFn::characteristic(u.complement().intersect(gen::pattern(rng, sp)), Rational(5));
      auto tf = iterate(DerivativeOp::oscillation(t, f, eps), ff);
      auto tg = iterate(DerivativeOp::oscillation(t, g, eps / Rational(4)), ff);
      for (const auto& s : stages) {
        expect(tf.at(s).intersect(u).subset_of(tg.at(s)), "fixture " + std::to_string(i) + " stage " + s.str());
      }
    }
    return std::string("20 fixtures, stages up to w*3");
  });
  run_check(r, "9", "non-vanishing infimum device", [] {
    const SpaceDesc sp1(Ordinal::parse("w+1"), 4), sp2(Ordinal::parse("w*2"), 4);
    const Ordinal w = Ordinal::omega();
    std::vector<TransfiniteFamily> fams = {
        TransfiniteFamily::sets(sp1, w, {{Ordinal{}, Formula::ge_param(Ordinal{})}}),
        TransfiniteFamily::sets(sp2, w, {{Ordinal{}, Formula::disj({Formula::ge_param(Ordinal{}), Formula::ord_ge(w)})}})
            .as_functions(),
    };
    fams.push_back(TransfiniteFamily::linear(
        {{Rational(2), fams[1]}, {Rational(1), TransfiniteFamily::sets(sp2, w, {{Ordinal{}, Formula::ge_param(w)}})}}));
    std::size_t n_checked = 0;
    for (std::size_t i = 0; i < fams.size(); ++i) {
      const auto& fam = fams[i];
      Topology t(fam.space());
      (void)verify_dusb(fam, t, 1, false);
      const StepFn g = infimum_fn(fam);
      expect(g.max_value() > 0, "family " + std::to_string(i) + " vanishes");
      const StepFn f = altsum_fn(fam, fam.length());
      for (const auto& eps : relevant_eps(f.values())) {
        auto level = [&](unsigned n) {
          const Rational c = eps * Rational(static_cast<std::int64_t>(n), 12);
          return g.where([&](const Rational& v) { return v >= c; });
        };
        for (unsigned n = 0; n <= 3; ++n) {
          const auto tr = iterate(DerivativeOp::oscillation(t, f, eps), level(n));
          expect(tr.at(w).subset_of(level(n + 1)), "family " + std::to_string(i) + " n=" + std::to_string(n));
          ++n_checked;
        }
      }
    }
    return std::to_string(n_checked) + " containments on 3 families";
  });
  return r;
}

}  // namespace suites

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string SuiteReport::str() const {
  std::ostringstream os;
  os << "suite " << suite << "\n";
  for (const auto& c : checks) {
    os << "  " << (c.passed ? "PASS" : "FAIL") << " ";
    if (!c.criterion.empty()) os << "[" << c.criterion << "] ";
    os << c.name << ": " << c.detail << "\n";
  }
  os << (passed() ? "all checks pass" : "some checks fail") << "\n";
  return os.str();
}

const std::vector<std::string_view>& suite_names() {
  static const std::vector<std::string_view> names = {"oracle",     "alpha-beta", "baire1-construct",
                                                      "baire1-rank", "polish-failure", "phi-supset",
                                                      "phi-subset", "xi-reduction", "lemmas"};
  return names;
}

SuiteReport run_suite(std::string_view name) {
  if (name == "oracle") return suites::oracle();
  if (name == "alpha-beta") return suites::alpha_beta();
  if (name == "baire1-construct") return suites::baire1_construct();
  if (name == "baire1-rank") return suites::baire1_rank();
  if (name == "polish-failure") return suites::polish_failure();
  if (name == "phi-supset") return suites::phi_supset();
  if (name == "phi-subset") return suites::phi_subset();
  if (name == "xi-reduction") return suites::xi_reduction();
  if (name == "lemmas") return suites::lemmas();
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

}  // namespace transfinite
