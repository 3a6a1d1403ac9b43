#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/oracle.hpp"
#include "transfinite/space.hpp"

using namespace transfinite;

namespace {
Ordinal O(const char* s) { return Ordinal::parse(s); }
SpaceDesc S(const char* bound) { return SpaceDesc(O(bound), 4); }
PatternSet P(const SpaceDesc& sp, const char* text) { return PatternSet::parse(sp, text); }
}  // namespace

TEST_SUITE("space") {

TEST_CASE("membership") {
  auto sp = S("w^2+1");
  CHECK(P(sp, "(mod 0 2 0)").contains(Ordinal::finite(4)));
  CHECK_FALSE(P(sp, "(gte w)").contains(Ordinal::finite(3)));
  CHECK(P(sp, "(and (eq 1 2) (eq 0 0))").contains(O("w*2")));
  CHECK(PatternSet::whole(sp).contains(O("w^2")));
  CHECK_FALSE(PatternSet::whole(sp).contains(O("w^2+1")));
  CHECK_THROWS_AS(P(sp, "(all)").contains(O("w^4")), Error);
}

TEST_CASE("compactness predicate") {
  CHECK(S("w+1").compact());
  CHECK_FALSE(S("w^2").compact());
  CHECK(S("1").compact());
}

TEST_CASE("boolean algebra") {
  auto sp = S("w^2+1");
  CHECK(P(sp, "(and (eq 0 1) (mod 0 2 0))").is_empty());
  auto x = PatternSet::whole(sp);
  CHECK(x.minus(x).is_empty());
  CHECK(P(sp, "(gte w)").intersect(P(sp, "(lt w)")).is_empty());
  CHECK(P(sp, "(mod 0 2 0)").unite(P(sp, "(mod 0 2 1)")) == x);
  CHECK(P(sp, "(mod 0 4 1)").subset_of(P(sp, "(mod 0 2 1)")));
}

TEST_CASE("closure examples") {
  {
    auto sp = S("w+1");
    Topology t(sp);
    CHECK(t.closure(PatternSet::none(sp)).is_empty());
    auto evens = P(sp, "(and (lt w) (mod 0 2 0))");
    CHECK(t.closure(evens) == evens.unite(PatternSet::singleton(sp, O("w"))));
  }
  {
    auto sp = S("w^2+1");
    Topology t(sp);
    auto s = P(sp, "(and (eq 0 1) (lt w^2))");
    CHECK(t.closure(s) == s.unite(PatternSet::singleton(sp, O("w^2"))));
  }
}

TEST_CASE("Cantor-Bendixson derivative examples") {
  auto sp = S("w^2+1");
  Topology t(sp);
  auto d1 = t.cb_derivative(PatternSet::whole(sp));
  CHECK(d1 == P(sp, "(and (eq 0 0) (or (ge 1 1) (ge 2 1)))"));
  CHECK(t.cb_derivative(d1) == PatternSet::singleton(sp, O("w^2")));
  CHECK(t.cb_derivative(P(sp, "(lt 7)")).is_empty());
  auto sp1 = S("w+1");
  CHECK(Topology(sp1).cb_derivative(PatternSet::singleton(sp1, O("w"))).is_empty());
}

TEST_CASE("borel classes") {
  auto sp = S("w+1");
  Topology t(sp);
  CHECK(t.borel_class(P(sp, "(and (lt w) (mod 0 2 0))")) == BorelClass::Open);
  CHECK(t.borel_class(PatternSet::whole(sp)) == BorelClass::Clopen);
  CHECK(t.borel_class(PatternSet::singleton(sp, O("w"))) == BorelClass::Closed);
  auto sp2 = S("w^2+1");
  Topology t2(sp2);
  // Even blocks' limits plus odd points: neither open nor closed.
  CHECK(t2.borel_class(P(sp2, "(or (and (eq 0 0) (mod 1 2 0)) (mod 0 2 1))")) == BorelClass::Delta2);
}

TEST_CASE("refinement") {
  auto sp = S("w^2");
  Topology base(sp);
  CHECK(base.refine({}, 2).cells().size() == 1);
  auto finite = P(sp, "(lt w)");
  Topology t = base.refine({finite}, 2);
  auto evens = P(sp, "(and (lt w) (mod 0 2 0))");
  CHECK(base.closure(evens) == evens.unite(PatternSet::singleton(sp, O("w"))));
  CHECK(t.closure(evens) == evens);
  CHECK(t.borel_class(finite) == BorelClass::Clopen);
  try {
    (void)base.refine({P(sp, "(gte w)")}, 1);
    FAIL("expected ClassViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClassViolation);
  }
}

TEST_CASE("property: refinement makes declared sets clopen and keeps base opens") {
  gen::Engine rng(404);
  for (int i = 0; i < 100; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 4);
    Topology base(sp);
    auto a = gen::pattern(rng, sp), b = gen::pattern(rng, sp);
    Topology t = base.refine({a, b}, 2);
    for (const auto& s : {a, b, a.intersect(b), a.unite(b.complement())}) CHECK(t.borel_class(s) == BorelClass::Clopen);
    auto u = gen::pattern(rng, sp);
    auto open = base.interior(u);
    CHECK(t.is_open(open));
  }
}

TEST_CASE("decompile round-trip") {
  gen::Engine rng(9);
  for (int i = 0; i < 500; ++i) {
    SpaceDesc sp = gen::space(rng, 4, 5);
    auto s = gen::pattern(rng, sp);
    auto back = PatternSet::from_formula(sp, s.formula());
    REQUIRE(back == s);
    REQUIRE(PatternSet::parse(sp, s.str()) == s);
  }
}

TEST_CASE("property: canonical form is set equality") {
  gen::Engine rng(12);
  for (int i = 0; i < 300; ++i) {
    SpaceDesc sp = gen::oracle_space(rng);
    auto f = gen::formula(rng, sp);
    auto s = PatternSet::from_formula(sp, f);
    // Same set written differently: double negation and a redundant split.
    auto g = Formula::disj({Formula::conj({f, Formula::digit_mod(0, 2, 0)}),
                            Formula::negate(Formula::disj({Formula::negate(f), Formula::digit_mod(0, 2, 0)}))});
    REQUIRE(PatternSet::from_formula(sp, g) == s);
    for (int k = 0; k < 20; ++k) {
      auto x = gen::point(rng, sp);
      REQUIRE(s.contains(x) == f.eval(x));
    }
  }
}

TEST_CASE("property: closure is a Kuratowski operator") {
  gen::Engine rng(1234);
  for (int i = 0; i < 1000; ++i) {
    SpaceDesc sp = gen::space(rng, 4, 4);
    Topology t(sp);
    auto a = gen::pattern(rng, sp), b = gen::pattern(rng, sp);
    auto ca = t.closure(a);
    REQUIRE(a.subset_of(ca));
    REQUIRE(t.closure(ca) == ca);
    REQUIRE(t.closure(a.unite(b)) == ca.unite(t.closure(b)));
    REQUIRE(t.closure(a.intersect(b)).subset_of(ca));
  }
}

TEST_CASE("property: pattern operators agree with the oracle") {
  gen::Engine rng(8080);
  for (int i = 0; i < 1000; ++i) {
    SpaceDesc sp = gen::oracle_space(rng);
    Topology t(sp);
    auto f = gen::formula(rng, sp);
    auto s = PatternSet::from_formula(sp, f);
    auto o = OracleSet::from_formula(sp, f);
    REQUIRE(OracleSet::from_pattern(s) == o);
    REQUIRE(o.to_pattern() == s);
    REQUIRE(OracleSet::from_pattern(t.closure(s)) == o.closure());
    auto fc = t.closure(s);
    REQUIRE(OracleSet::from_pattern(t.cb_derivative(fc)) == o.closure().cb_derivative());
    const bool oc = o.closure() == o;
    const bool oo = o.complement().closure() == o.complement();
    const BorelClass expect = oc && oo ? BorelClass::Clopen : oo ? BorelClass::Open : oc ? BorelClass::Closed : BorelClass::Delta2;
    REQUIRE(t.borel_class(s) == expect);
  }
}

}  // TEST_SUITE
