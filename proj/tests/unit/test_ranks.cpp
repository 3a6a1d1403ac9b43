#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/ranks.hpp"

using namespace transfinite;

namespace {
Ordinal O(const char* s) { return Ordinal::parse(s); }
SpaceDesc S(const char* bound) { return SpaceDesc(O(bound), 4); }
PatternSet P(const SpaceDesc& sp, const char* text) { return PatternSet::parse(sp, text); }
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

// Sequence families whose convergence rank is finite: n-gated step functions
// that settle after a few indices.
SeqFamily settling(gen::Engine& rng, const SpaceDesc& sp) {
  auto f = gen::stepfn(rng, sp, 2), g = gen::stepfn(rng, sp, 2);
  std::vector<SeqFamily::Piece> ps;
  const Formula late = Formula::ge_n(1 + gen::below(rng, 4));
  for (const auto& p : f.pieces()) ps.push_back({p.value, Formula::conj({Formula::negate(late), p.cell.formula()})});
  for (const auto& p : g.pieces()) ps.push_back({p.value, Formula::conj({late, p.cell.formula()})});
  return SeqFamily(sp, std::move(ps));
}
}  // namespace

TEST_SUITE("ranks") {

TEST_CASE("alpha_pair examples") {
  auto sp = S("w+1");
  Topology t(sp);
  CHECK(alpha_pair(PatternSet::none(sp), t.whole(), t).value.str() == "1");
  CHECK(alpha_pair(P(sp, "(lt w)"), PatternSet::singleton(sp, O("w")), t).value.str() == "2");
  auto sp2 = S("w^2+1");
  Topology t2(sp2);
  auto a = least_digit_even(sp2);
  auto r = alpha_pair(a, a.complement(), t2);
  CHECK(r.value.str() == "3");
  CHECK(r.trace.stages[1].set == P(sp2, "(eq 0 0)").minus(PatternSet::singleton(sp2, Ordinal{})));
  CHECK(r.trace.stages[2].set == PatternSet::singleton(sp2, O("w^2")));
}

TEST_CASE("alpha_fn and beta examples") {
  auto sp = S("w+1");
  Topology t(sp);
  auto c = StepFn::constant(sp, R("2/3"));
  CHECK(alpha_fn(c, t).value.str() == "1");
  CHECK(beta(c, t).value.str() == "1");
  auto chi = StepFn::characteristic(P(sp, "(lt w)"));
  auto af = alpha_fn(chi, t);
  CHECK(af.value.str() == "2");
  CHECK(af.parameter == "p=0 q=1");
  CHECK(beta(chi, t).value.str() == "2");

  auto sp2 = S("w^2+1");
  Topology t2(sp2);
  auto dense = StepFn::characteristic(least_digit_even(sp2));
  CHECK(alpha_fn(dense, t2).value.str() == "3");
  // 0 on successors, 2 on limits below w^2, 1 at w^2.
  auto nested = StepFn(sp2, {{0, P(sp2, "(ge 0 1)")}, {2, P(sp2, "(and (eq 0 0) (lt w^2))")}, {1, P(sp2, "(gte w^2)")}});
  auto b = beta(nested, t2);
  CHECK(b.value.str() == "3");
  CHECK(b.value == alpha_fn(nested, t2).value);
  CHECK(b.per_parameter.size() == 2);
  // With 1 and 2 swapped the jump at w^2 is no longer a separation of
  // consecutive levels: alpha drops to 2 while beta stays 3.
  auto swapped = StepFn(sp2, {{0, P(sp2, "(ge 0 1)")}, {1, P(sp2, "(and (eq 0 0) (lt w^2))")}, {2, P(sp2, "(gte w^2)")}});
  CHECK(alpha_fn(swapped, t2).value.str() == "2");
  CHECK(beta(swapped, t2).value.str() == "3");
  CHECK(b.str().find("beta = ") == 0);
}

TEST_CASE("gamma_seq examples") {
  auto sp = S("w+1");
  Topology t(sp);
  auto c = SeqFamily::constant(StepFn::characteristic(P(sp, "(mod 0 2 0)")));
  CHECK(gamma_seq(c, t).value.str() == "1");
  // f_n = indicator of [n, w).
  const Formula in = Formula::conj({Formula::ord_lt(O("w")), Formula::digit_ge_n(0, 1, 0)});
  SeqFamily tails(sp, {{1, in}, {0, Formula::negate(in)}});
  auto g = gamma_seq(tails, t);
  CHECK(g.value.str() == "2");
  CHECK(g.pseudouniform());
  SeqFamily osc(sp, {{1, Formula::mod_n(2, 0)}, {0, Formula::mod_n(2, 1)}});
  CHECK_FALSE(gamma_seq(osc, t).pseudouniform());
}

TEST_CASE("relevant epsilons") {
  CHECK(relevant_eps({}) == std::vector<Rational>{1});
  CHECK(relevant_eps({R("1/2")}) == std::vector<Rational>{1});
  CHECK(relevant_eps({0, R("1/2"), 2}) == std::vector<Rational>{R("1/2"), R("3/2"), 2});
}

TEST_CASE("alpha_xi_verify examples") {
  auto sp = S("w");
  Topology t(sp);
  auto x = t.whole(), none = PatternSet::none(sp);
  auto two = TransfiniteFamily::finite_sets({x, none});
  CHECK(alpha_xi_verify(x, none, two, 1, t).length == O("2"));
  auto evens = P(sp, "(mod 0 2 0)");
  auto cert = alpha_xi_verify(evens, evens.complement(), TransfiniteFamily::tails(sp), 1, t);
  CHECK(cert.length == O("w"));
  CHECK(cert.difference_union == evens);
  CHECK(kind_of([&] { (void)alpha_xi_verify(x, none, TransfiniteFamily::tails(sp), 1, t); }) == ErrorKind::InclusionViolation);
  CHECK(kind_of([&] { (void)alpha_xi_verify(evens, x, two, 1, t); }) == ErrorKind::InclusionViolation);
  auto sp1 = S("w+1");
  Topology t1(sp1);
  auto open = TransfiniteFamily::finite_sets({t1.whole(), P(sp1, "(lt w)")});
  CHECK(kind_of([&] { (void)alpha_xi_verify(P(sp1, "(gte w)"), P(sp1, "(lt w)"), open, 1, t1); }) == ErrorKind::ClassViolation);
  CHECK(alpha_xi_verify(P(sp1, "(gte w)"), P(sp1, "(lt w)"), open, 2, t1).xi == 2);
}

TEST_CASE("class membership examples") {
  auto sp = S("w+1");
  Topology t(sp);
  auto c = class_membership(StepFn::constant(sp, 3), 0, 1, t, {});
  CHECK(c.alpha.str() == "1");
  auto a = P(sp, "(and (lt w) (mod 0 2 0))");
  auto chi = StepFn::characteristic(a);
  auto cert = class_membership(chi, 1, 1, t, {{layered_witness(a, t)}, std::nullopt});
  CHECK(cert.alpha.str() == "2");
  CHECK(cert.pairs.size() == 1);
  CHECK(kind_of([&] { (void)class_membership(chi, 0, 1, t, {{layered_witness(a, t)}, std::nullopt}); }) ==
        ErrorKind::CertificateViolation);
  CHECK(kind_of([&] { (void)class_membership(chi, 1, 1, t, {}); }) == ErrorKind::WitnessMismatch);

  // Class 2 on [0, w^2): the successor points, made clopen by declaring the
  // limit points clopen.
  auto sp2 = S("w^2");
  Topology base(sp2);
  auto succ = P(sp2, "(ge 0 1)");
  auto f = StepFn::characteristic(succ);
  CHECK(semi_borel_class(f, base) == 2);
  auto refined = base.refine({succ.complement()}, 2);
  CHECK(semi_borel_class(f, refined) == 1);
  auto wit = TransfiniteFamily::finite_sets({refined.whole(), succ.complement()});
  auto c2 = class_membership(f, 1, 2, base, {{wit}, refined});
  CHECK(c2.via_refinement);
  CHECK(c2.beta.str() == "1");
  // The same sets also separate in the base topology: every step function on
  // these countable spaces is of class 1.
  CHECK(class_membership(f, 1, 1, base, {{wit}, std::nullopt}).alpha.str() == "2");
  // A family whose second set is open but not closed needs the refinement.
  auto lim = StepFn::characteristic(succ.complement());
  auto open_wit = TransfiniteFamily::finite_sets({base.whole(), succ});
  CHECK(kind_of([&] { (void)class_membership(lim, 1, 1, base, {{open_wit}, std::nullopt}); }) == ErrorKind::ClassViolation);
  CHECK(class_membership(lim, 1, 2, base, {{open_wit}, refined}).via_refinement);
  CHECK(kind_of([&] { (void)class_membership(lim, 1, 1, base, {{open_wit}, refined}); }) == ErrorKind::ClassViolation);
}

TEST_CASE("dense and co-dense pairs have the CB rank") {
  for (unsigned lambda = 1; lambda <= 3; ++lambda) {
    CAPTURE(lambda);
    auto sp = cb_rank_space(lambda);
    Topology t(sp);
    CHECK(iterate(DerivativeOp::cantor_bendixson(t), t.whole()).rank.value == Ordinal::finite(lambda));
    CHECK(alpha_fn(StepFn::characteristic(least_digit_even(sp)), t).value.value == Ordinal::finite(lambda));
    // Without the top point the rank stays lambda - 1 ... lambda: [0, w^k).
    SpaceDesc open(Ordinal::omega_power(lambda), 6);
    Topology to(open);
    CHECK(alpha_fn(StepFn::characteristic(least_digit_even(open)), to).value.value == Ordinal::finite(lambda));
  }
}

TEST_CASE("property: perturbations keep the separation rank") {
  auto sp = cb_rank_space(3);
  Topology t(sp);
  auto chi = StepFn::characteristic(least_digit_even(sp));
  const auto base = alpha_fn(chi, t).value;
  gen::Engine rng(33);
  for (int i = 0; i < 20; ++i) {
    auto noise = gen::stepfn(rng, sp).map([](const Rational& v) { return v / 3; });
    auto f = chi + noise;
    REQUIRE(distance(f, chi) <= R("1/3"));
    REQUIRE_FALSE(rank_less(alpha_fn(f, t).value, base));
  }
}

TEST_CASE("property: alpha and beta agree stagewise on characteristic functions") {
  gen::Engine rng(4242);
  for (int i = 0; i < 50; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t = gen::topology(rng, sp);
    auto a = gen::pattern(rng, sp);
    auto sep = iterate(DerivativeOp::separation(t, a.complement(), a), t.whole());
    for (const auto& e : {R("1/4"), R("1/2"), R("1")}) {
      auto osc = iterate(DerivativeOp::oscillation(t, StepFn::characteristic(a), e), t.whole());
      REQUIRE(osc.stages.size() == sep.stages.size());
      for (std::size_t k = 0; k < sep.stages.size(); ++k) REQUIRE(osc.stages[k].set == sep.stages[k].set);
      REQUIRE(osc.rank == sep.rank);
    }
  }
}

TEST_CASE("property: the sum of pseudouniform sequences is pseudouniform") {
  gen::Engine rng(5150);
  int pairs = 0;
  for (int i = 0; i < 200 && pairs < 50; ++i) {
    SpaceDesc sp = gen::space(rng, 2, 3);
    Topology t = gen::topology(rng, sp);
    auto f = gen::coin(rng) ? settling(rng, sp) : gen::seqfamily(rng, sp);
    auto g = gen::coin(rng) ? settling(rng, sp) : gen::seqfamily(rng, sp);
    if (!gamma_seq(f, t).pseudouniform() || !gamma_seq(g, t).pseudouniform()) continue;
    ++pairs;
    REQUIRE(gamma_seq(f + g, t).pseudouniform());
  }
  CHECK(pairs == 50);
}

TEST_CASE("property: beta does not grow under clamps and affine maps") {
  gen::Engine rng(6060);
  for (int i = 0; i < 100; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t = gen::topology(rng, sp);
    auto f = gen::stepfn(rng, sp, 4);
    const auto bf = beta(f, t).value;
    StepFn g;
    if (i % 2 == 0) {
      g = clamp_hk(f, static_cast<unsigned>(gen::below(rng, 4)));
    } else {
      const Rational a(static_cast<std::int64_t>(gen::below(rng, 7)) - 3, 2), b(static_cast<std::int64_t>(gen::below(rng, 5)), 4);
      g = f.map([&](const Rational& v) { return a * v + b; });
    }
    REQUIRE_FALSE(rank_less(bf, beta(g, t).value));
  }
}

TEST_CASE("property: separation rank is at most the layered witness length") {
  gen::Engine rng(7070);
  for (int i = 0; i < 60; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t = gen::topology(rng, sp);
    auto a = gen::pattern(rng, sp);
    auto w = layered_witness(a, t);
    auto r = alpha_pair(a, a.complement(), t).value;
    REQUIRE(r.le(w.length()));
    auto cert = alpha_xi_verify(a, a.complement(), w, 1, t);
    REQUIRE(cert.difference_union == a);
  }
}

}  // TEST_SUITE
