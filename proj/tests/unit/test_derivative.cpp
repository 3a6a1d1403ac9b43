#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/derivative.hpp"

using namespace transfinite;

namespace {
Ordinal O(const char* s) { return Ordinal::parse(s); }
SpaceDesc S(const char* bound) { return SpaceDesc(O(bound), 4); }
PatternSet P(const SpaceDesc& sp, const char* text) { return PatternSet::parse(sp, text); }

}  // namespace

TEST_SUITE("derivative") {

TEST_CASE("apply examples") {
  auto sp = S("w+1");
  Topology t(sp);
  auto x = PatternSet::whole(sp);
  auto fin = P(sp, "(lt w)");
  auto top = PatternSet::singleton(sp, O("w"));
  CHECK(DerivativeOp::separation(t, fin, PatternSet::none(sp)).apply(x).is_empty());
  CHECK(DerivativeOp::separation(t, fin, top).apply(x) == top);
  CHECK(DerivativeOp::oscillation(t, StepFn::characteristic(fin), Rational(1, 2)).apply(x) == top);
}

TEST_CASE("iterate examples") {
  {
    auto sp = S("w+1");
    Topology t(sp);
    auto tr = iterate(DerivativeOp::cantor_bendixson(t), t.whole());
    REQUIRE(tr.stages.size() == 3);
    CHECK(tr.stages[1].set == PatternSet::singleton(sp, O("w")));
    CHECK(tr.stages[2].set.is_empty());
    CHECK(tr.rank.str() == "2");
    auto sep = DerivativeOp::separation(t, P(sp, "(and (lt w) (mod 0 2 0))"), P(sp, "(and (lt w) (mod 0 2 1))"));
    auto tr2 = iterate(sep, t.whole());
    CHECK(tr2.stages[1].set == PatternSet::singleton(sp, O("w")));
    CHECK(tr2.rank.str() == "2");
    CHECK(rank(sep).str() == "2");
  }
  {
    auto sp = S("w^2+1");
    Topology t(sp);
    auto tr = iterate(DerivativeOp::cantor_bendixson(t), t.whole());
    REQUIRE(tr.rank.stabilized());
    CHECK(tr.rank.str() == "3");
    CHECK(tr.stages[1].set == P(sp, "(and (eq 0 0) (or (ge 1 1) (ge 2 1)))"));
    CHECK(tr.stages[2].set == PatternSet::singleton(sp, O("w^2")));
    CHECK(tr.at(O("w")).is_empty());
    CHECK(tr.log().find("stage 2 set (and (eq 2 1) (eq 1 0) (eq 0 0))") != std::string::npos);
  }
}

TEST_CASE("a nonempty fixpoint gives the omega_1 marker") {
  auto sp = S("w+1");
  Topology t(sp);
  auto evens = P(sp, "(mod 0 2 0)");
  auto tr = iterate(DerivativeOp::separation(t, evens, evens), t.whole());
  CHECK(tr.fixpoint);
  CHECK_FALSE(tr.rank.stabilized());
  CHECK(tr.rank.str() == "w1");
  CHECK(tr.at(O("w*3")) == evens);
}

TEST_CASE("budget") {
  auto sp = S("w^2+1");
  Topology t(sp);
  Budget b;
  b.successor_steps = 1;
  try {
    (void)iterate(DerivativeOp::cantor_bendixson(t), t.whole(), b);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}

TEST_CASE("convergence derivative examples") {
  auto sp = S("w^2+1");
  Topology t(sp);
  // f_n = indicator of c_0 >= n: converges to 0 everywhere, but the jumps
  // accumulate at every limit point.
  auto tails = SeqFamily(sp, {{1, Formula::digit_ge_n(0, 1, 0)}, {0, Formula::negate(Formula::digit_ge_n(0, 1, 0))}});
  auto d = DerivativeOp::convergence(t, tails, Rational(1, 2));
  CHECK(d.apply(t.whole()) == P(sp, "(and (eq 0 0) (or (ge 1 1) (ge 2 1)))"));
  CHECK(rank(d).str() == "2");
  // A period-two oscillation on even points never converges there.
  auto osc = SeqFamily(sp, {{1, Formula::conj({Formula::mod_n(2, 0), Formula::digit_mod(0, 2, 0)})},
                            {0, Formula::negate(Formula::conj({Formula::mod_n(2, 0), Formula::digit_mod(0, 2, 0)}))}});
  auto d2 = DerivativeOp::convergence(t, osc, Rational(1));
  CHECK(d2.apply(t.whole()) == P(sp, "(mod 0 2 0)"));
  CHECK(rank(d2).str() == "w1");
  // Constant sequences converge everywhere.
  auto c = SeqFamily::constant(StepFn::characteristic(P(sp, "(mod 0 2 0)")));
  CHECK(DerivativeOp::convergence(t, c, Rational(1, 4)).apply(t.whole()).is_empty());
}

TEST_CASE("property: derivatives shrink and are monotone") {
  gen::Engine rng(515);
  for (int i = 0; i < 200; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t = gen::topology(rng, sp);
    auto d = gen::derivative_op(rng, t, i % 4);
    auto g = gen::closed(rng, t);
    auto f = t.closure(g.intersect(gen::pattern(rng, sp)));
    auto df = d.apply(f), dg = d.apply(g);
    REQUIRE(df.subset_of(f));
    REQUIRE(t.is_closed(df));
    REQUIRE(df.subset_of(dg));
  }
}

TEST_CASE("property: traces decrease strictly until they stop") {
  gen::Engine rng(616);
  for (int i = 0; i < 100; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t = gen::topology(rng, sp);
    auto d = gen::derivative_op(rng, t, i % 4);
    auto tr = iterate(d, t.whole());
    for (std::size_t k = 1; k < tr.stages.size(); ++k) {
      REQUIRE(tr.stages[k].set.subset_of(tr.stages[k - 1].set));
      REQUIRE_FALSE(tr.stages[k].set == tr.stages[k - 1].set);
    }
    REQUIRE(tr.stages.size() <= sp.dims() + 3);
    REQUIRE((tr.rank.stabilized() != tr.fixpoint));
  }
}

TEST_CASE("property: derivative operators agree with the oracle") {
  for (int which = 0; which < 4; ++which) {
    CAPTURE(which);
    gen::Engine rng(9000 + which);
    for (int i = 0; i < 1000; ++i) {
      SpaceDesc sp = gen::oracle_space(rng);
      Topology t = gen::topology(rng, sp);
      auto d = gen::derivative_op(rng, t, which);
      auto f = gen::closed(rng, t);
      const auto got = d.apply(f);
      const auto want = oracle_apply(d, OracleSet::from_pattern(f));
      if (!(OracleSet::from_pattern(got) == want)) {
        FAIL_CHECK(d.describe() << " on " << f.str() << " in " << sp.str() << ": got " << got.str() << " want "
                                << want.to_pattern().str());
        break;
      }
      if (i % 10 == 0) {
        auto tr = iterate(d, f);
        auto otr = oracle_iterate(d, OracleSet::from_pattern(f));
        REQUIRE(tr.rank == otr.rank);
        REQUIRE(tr.stages.size() == otr.stages.size());
        for (std::size_t k = 0; k < tr.stages.size(); ++k) REQUIRE(OracleSet::from_pattern(tr.stages[k].set) == otr.stages[k]);
      }
    }
  }
}

}  // TEST_SUITE
