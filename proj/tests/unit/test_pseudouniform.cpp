#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/pseudouniform.hpp"

using namespace transfinite;

namespace {
Ordinal O(const char* s) { return Ordinal::parse(s); }
SpaceDesc S(const char* bound) { return SpaceDesc(O(bound), 4); }
PatternSet P(const SpaceDesc& sp, const char* text) { return PatternSet::parse(sp, text); }
Formula F(const char* text) { return Formula::parse(text); }
Rational R(const char* s) { return parse_rational(s); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Unsupported;
}

struct Fixture {
  SpaceDesc sp;
  Topology t;
  TransfiniteFamily sep;
  PatternSet a;
  explicit Fixture(const char* bound)
      : sp(S(bound)), t(sp), sep(TransfiniteFamily::tails(sp)), a(even_difference_union(sep)) {}
};

const Fixture& w2() {
  static const Fixture f("w^2");
  return f;
}
const Fixture& w3() {
  static const Fixture f("w^3");
  return f;
}
const PhiWitness& w2_witness() {
  static const PhiWitness w = phi_generate(w2().a, w2().sep, 1, w2().t);
  return w;
}
}  // namespace

TEST_SUITE("pseudouniform") {

TEST_CASE("lambda_k") {
  CHECK(lambda_k(1, 1) == O("2"));
  CHECK(lambda_k(1, 3) == O("6"));
  CHECK(lambda_k(2, 2) == O("w*2"));
  CHECK(kind_of([] { (void)lambda_k(1, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("build_Bk examples") {
  const auto& fx = w2();
  CHECK(fx.a == P(fx.sp, "(mod 0 2 0)"));
  auto bs = build_Bk(fx.sep, 1, {O("2"), O("4")});
  REQUIRE(bs.size() == 2);
  CHECK(bs[0] == P(fx.sp, "(eq 0 0)"));
  CHECK(bs[1] == P(fx.sp, "(or (eq 0 0) (eq 0 2))"));
  CHECK(kind_of([&] { (void)build_Bk(fx.sep, 1, {O("3")}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { (void)build_Bk(fx.sep, 1, {O("4"), O("2")}); }) == ErrorKind::InvalidArgument);

  // A short family: lambda_k = 4 covers every even index.
  auto sp = S("w*2");
  auto fam = TransfiniteFamily::finite_sets({PatternSet::whole(sp), P(sp, "(gte w)"), P(sp, "(gte w+1)"),
                                             P(sp, "(gte w+2)")});
  CHECK(build_Bk(fam, 1, {O("4")})[0] == even_difference_union(fam));

  const auto& f3 = w3();
  auto b3 = build_Bk(f3.sep, 2, {O("w")});
  CHECK(b3[0] == P(f3.sp, "(and (mod 0 2 0) (eq 1 0))"));
}

TEST_CASE("P_eta examples") {
  const auto& fx = w2();
  auto p = build_P_eta(fx.sep, 1, 0, O("2"), fx.t);
  CHECK(p.length() == O("6"));
  CHECK(p.set_at(O("0")) == fx.t.whole());
  CHECK(p.set_at(O("1")) == fx.t.whole());
  CHECK(p.set_at(O("2")) == fx.sep.set_at(O("0")));
  CHECK(p.set_at(O("3")) == fx.sep.set_at(O("1")));
  CHECK(p.set_at(O("4")).is_empty());
  CHECK(p.set_at(O("5")).is_empty());
  CHECK(even_difference_union(p) == P(fx.sp, "(eq 0 0)").intersect(P(fx.sp, "(lt 1)")));

  auto p4 = build_P_eta(fx.sep, 1, 0, O("4"), fx.t);
  CHECK(even_difference_union(p4) == P(fx.sp, "(or (eq 0 0) (eq 0 2))").intersect(P(fx.sp, "(lt 3)")));
  auto p4m = build_P_eta(fx.sep, 1, 2, O("4"), fx.t);
  CHECK(even_difference_union(p4m) == P(fx.sp, "(and (or (eq 0 0) (eq 0 2)) (gte w*2) (lt w*2+3))"));

  const auto& f3 = w3();
  auto pw = build_P_eta(f3.sep, 2, 0, O("w"), f3.t);
  CHECK(pw.length() == O("w+4"));
  CHECK(pw.set_at(O("5")) == f3.sep.set_at(O("3")));
  CHECK(pw.set_at(O("w")) == f3.sep.set_at(O("w")));
  CHECK(pw.set_at(O("w+1")) == f3.sep.set_at(O("w")));
  CHECK(pw.set_at(O("w+2")).is_empty());
  auto pw2 = build_P_eta(f3.sep, 2, 1, O("w*2"), f3.t);
  CHECK(pw2.set_at(O("3")) == f3.sep.set_at(O("w^2+1")));
  CHECK(pw2.set_at(O("w+3")) == f3.sep.set_at(O("w^2+w+3")));
  CHECK(pw2.set_at(O("w*2+1")) == f3.sep.set_at(O("w^2+w*2")));
  CHECK(even_difference_union(pw2) == local_difference_union(f3.sep, 2, 1, O("w*2")));

  // An increasing family gives no witness.
  auto bad = TransfiniteFamily::sets(fx.sp, fx.sp.bound, {{Ordinal{}, F("(lt-param \"1\")")}});
  CHECK(kind_of([&] { (void)build_P_eta(bad, 1, 0, O("2"), fx.t); }) == ErrorKind::WitnessMismatch);
}

TEST_CASE("certify_pseudouniform examples") {
  const auto& fx = w2();
  auto settled = SeqFamily::gated(StepFn::characteristic(fx.a), Formula::ge_n(3));
  auto c = certify_pseudouniform(settled, fx.t);
  CHECK(c.gamma.value.str() == "1");

  auto seq = tails_phi_sequence(fx.sp, 1);
  auto cert = certify_pseudouniform(seq, fx.t, &fx.sep, 1, 5);
  CHECK(cert.gamma.pseudouniform());
  CHECK(cert.checks.size() == 2);

  auto sp = S("w+1");
  SeqFamily osc(sp, {{Rational(1), Formula::mod_n(2, 0)}, {Rational(0), Formula::negate(Formula::mod_n(2, 0))}});
  CHECK(kind_of([&] { (void)certify_pseudouniform(osc, Topology(sp)); }) == ErrorKind::CertificateViolation);
}

TEST_CASE("phi_generate examples") {
  const auto& fx = w2();
  const auto& w = w2_witness();
  CHECK(w.target == StepFn::characteristic(fx.a));
  REQUIRE(w.term_beta.size() == 4);
  for (const auto& b : w.term_beta) CHECK(b.le(O("w^2")));
  CHECK(w.pseudo.gamma.pseudouniform());
  CHECK(w.sequence.at(1) == StepFn::characteristic(P(fx.sp, "(or (eq 0 0) (eq 0 2))")));

  auto none = phi_generate(PatternSet::none(fx.sp), fx.sep, 1, fx.t);
  for (std::uint64_t n = 0; n < 4; ++n) CHECK(none.sequence.at(n) == StepFn::constant(fx.sp, 0));

  const auto& f3 = w3();
  auto w3w = phi_generate(f3.a, f3.sep, 2, f3.t, 3, 2);
  CHECK(w3w.pseudo.gamma.pseudouniform());
  for (const auto& b : w3w.term_beta) CHECK(b.le(O("w^3")));

  CHECK(kind_of([&] { (void)phi_generate(P(fx.sp, "(eq 0 0)"), fx.sep, 1, fx.t); }) == ErrorKind::WitnessMismatch);
  auto sp = S("w*3");
  CHECK(kind_of([&] {
          (void)phi_generate(P(sp, "(mod 0 2 0)"), TransfiniteFamily::tails(sp), 1, Topology(sp));
        }) == ErrorKind::Unsupported);
}

TEST_CASE("phi_step and phi_sum") {
  const auto& fx = w2();
  const auto& w = w2_witness();
  auto single = phi_step(w.target, {{Rational(1), w}});
  for (std::uint64_t n = 0; n < 5; ++n) CHECK(single.sequence.at(n) == w.sequence.at(n));

  auto two = phi_step(w.target.scale(3), {{Rational(1), w}, {Rational(2), w}});
  CHECK(two.pseudo.gamma.pseudouniform());
  CHECK(two.checks.front().find("additive") != std::string::npos);
  CHECK(kind_of([&] { (void)phi_step(w.target, {{Rational(2), w}}); }) == ErrorKind::CertificateViolation);

  UniformPresentation p;
  p.base = 0;
  std::vector<PhiWitness> per;
  for (unsigned k = 0; k < 3; ++k) {
    const StepFn term = w.target.scale(pow2_inv(k));
    p.terms.push_back(term);
    per.push_back(phi_step(term, {{pow2_inv(k), w}}));
  }
  p.tail_bound = R("1/8");
  auto s = phi_sum(p, per, R("1/8"));
  CHECK(s.target == w.target.scale(R("7/4")));
  CHECK(s.sequence.at(0) == w.sequence.at(0));
  CHECK(s.sequence.at(4) == w.sequence.at(4).scale(R("7/4")));
  CHECK(s.pseudo.gamma.pseudouniform());
  CHECK(kind_of([&] { (void)phi_sum(p, per, R("1/16")); }) == ErrorKind::CertificateViolation);
  per.pop_back();
  CHECK(kind_of([&] { (void)phi_sum(p, per, R("1/8")); }) == ErrorKind::WitnessMismatch);
  (void)fx;
}

TEST_CASE("subset direction") {
  const auto& fx = w2();
  CHECK(check_phi_subset(w2_witness()).size() == 2);
  auto two = phi_step(w2_witness().target.scale(3), {{Rational(1), w2_witness()}, {Rational(2), w2_witness()}});
  CHECK_NOTHROW(check_phi_subset(two));
  const auto& f3 = w3();
  CHECK_NOTHROW(check_phi_subset(phi_generate(f3.a, f3.sep, 2, f3.t, 2, 2)));
  (void)fx;
}

TEST_CASE("refined topology") {
  const auto& fx = w2();
  auto succ = P(fx.sp, "(ge 0 1)");
  auto r = phi_refined(fx.a, fx.sep, 1, fx.t, {succ}, 2, 2, 2);
  CHECK(r.xi == 2);
  REQUIRE(r.base.has_value());
  CHECK_FALSE(rank_less(w2_witness().pseudo.gamma.value, r.pseudo.gamma.value));
  auto direct = phi_generate(fx.a, fx.sep, 1, fx.t.refine({succ}, 2), 2, 2);
  CHECK(direct.pseudo.gamma.value == r.pseudo.gamma.value);
  CHECK(direct.term_beta == r.term_beta);
}

TEST_CASE("property: derivatives of functions") {
  gen::Engine rng(4101);
  const std::vector<Ordinal> stages = {O("0"), O("1"), O("2"), O("3"), O("5"), O("w"), O("w+1"), O("w*2"), O("w*3")};
  for (int i = 0; i < 20; ++i) {
    auto sp = gen::space(rng, 3);
    Topology t = gen::coin(rng) ? Topology(sp) : gen::topology(rng, sp);
    auto f = gen::stepfn(rng, sp, 3);
    const Rational eps = relevant_eps(f.values()).back();
    auto u = t.interior(gen::pattern(rng, sp));
    auto ff = t.closure(gen::pattern(rng, sp));
    if (gen::coin(rng, 0.3)) ff = t.whole();
    // g within eps/4 of f on U, arbitrary elsewhere.
    auto near = StepFn::characteristic(gen::pattern(rng, sp), eps / Rational(4));
    auto far = StepFn::characteristic(u.complement().intersect(gen::pattern(rng, sp)), Rational(5));
    auto g = f + near + far;
    auto tf = iterate(DerivativeOp::oscillation(t, f, eps), ff);
    auto tg = iterate(DerivativeOp::oscillation(t, g, eps / Rational(4)), ff);
    for (const auto& s : stages) {
      INFO("fixture " << i << " stage " << s.str());
      CHECK(tf.at(s).intersect(u).subset_of(tg.at(s)));
    }
  }
}

TEST_CASE("property: non-vanishing infimum") {
  auto sp1 = S("w+1");
  auto sp2 = S("w*2");
  std::vector<TransfiniteFamily> fams = {
      TransfiniteFamily::sets(sp1, O("w"), {{Ordinal{}, F("(ge-param \"0\")")}}),
      TransfiniteFamily::sets(sp2, O("w"), {{Ordinal{}, F("(or (ge-param \"0\") (gte w))")}}).as_functions(),
  };
  fams.push_back(TransfiniteFamily::linear({{Rational(2), fams[1]},
                                            {Rational(1), TransfiniteFamily::sets(sp2, O("w"),
                                                                                  {{Ordinal{}, F("(ge-param \"w\")")}})}}));
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const auto& fam = fams[i];
    Topology t(fam.space());
    CHECK_NOTHROW(verify_dusb(fam, t, 1, false));
    auto g = infimum_fn(fam);
    CHECK(g.max_value() > 0);
    auto f = altsum_fn(fam, fam.length());
    for (const auto& eps : relevant_eps(f.values())) {
      auto level = [&](unsigned n) {
        const Rational c = eps * Rational(static_cast<std::int64_t>(n), 12);
        return g.where([&](const Rational& v) { return v >= c; });
      };
      for (unsigned n = 0; n <= 3; ++n) {
        INFO("family " << i << " eps " << to_string(eps) << " n " << n);
        const PatternSet fn = level(n);
        CHECK(t.is_closed(fn));
        auto tr = iterate(DerivativeOp::oscillation(t, f, eps), fn);
        CHECK(tr.at(O("w")).subset_of(level(n + 1)));
      }
    }
  }
}

TEST_CASE("property: refinement never increases gamma") {
  gen::Engine rng(4102);
  for (int i = 0; i < 40; ++i) {
    auto sp = gen::space(rng, 2);
    Topology t(sp);
    auto fam = gen::seqfamily(rng, sp);
    auto coarse = gamma_seq(fam, t);
    Topology fine = t.refine({t.closure(gen::pattern(rng, sp)).intersect(t.interior(gen::pattern(rng, sp)))}, 2);
    auto finer = gamma_seq(fam, fine);
    INFO(to_string(fam.to_sexpr("f")));
    CHECK_FALSE(rank_less(coarse.value, finer.value));
  }
}

}  // TEST_SUITE
