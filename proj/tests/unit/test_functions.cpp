#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/functions.hpp"

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
}  // namespace

TEST_SUITE("functions") {

TEST_CASE("rationals") {
  CHECK(R("3/6") == Rational(1, 2));
  CHECK(R("-2") == Rational(-2));
  CHECK(to_string(R("6/4")) == "3/2");
  CHECK(kind_of([] { (void)R("1/0"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { (void)R("x"); }) == ErrorKind::Parse);
  CHECK(pow2_inv(3) == Rational(1, 8));
}

TEST_CASE("eval examples") {
  auto sp = S("w+1");
  CHECK(StepFn::constant(sp, R("5/3")).eval(O("w")) == R("5/3"));
  CHECK(StepFn::characteristic(P(sp, "(mod 0 2 0)")).eval(O("7")) == 0);
  auto f = StepFn::characteristic(P(sp, "(lt w)"), 2) + StepFn::characteristic(PatternSet::singleton(sp, O("w")), 5);
  CHECK(f.eval(O("w")) == 5);
  CHECK(f.eval(O("3")) == 2);
  CHECK(kind_of([&] { (void)f.eval(O("w+1")); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("partition violations") {
  auto sp = S("w+1");
  auto a = P(sp, "(lt 5)");
  CHECK(kind_of([&] { StepFn(sp, {{1, a}, {2, P(sp, "(lt 3)")}, {0, a.complement()}}); }) ==
        ErrorKind::PartitionViolation);
  CHECK(kind_of([&] { StepFn(sp, {{1, a}}); }) == ErrorKind::PartitionViolation);
  // Equal values merge.
  auto f = StepFn(sp, {{1, a}, {1, a.complement()}});
  CHECK(f.pieces().size() == 1);
}

TEST_CASE("oscillation examples") {
  auto sp = S("w+1");
  Topology t(sp);
  auto chi = StepFn::characteristic(P(sp, "(lt w)"));
  auto x = PatternSet::whole(sp);
  CHECK(oscillation(chi, O("w"), x, t) == 1);
  CHECK(oscillation(chi, O("w"), PatternSet::singleton(sp, O("w")), t) == 0);
  CHECK(oscillation(chi, O("4"), x, t) == 0);
}

TEST_CASE("arithmetic examples") {
  auto sp = S("w^2+1");
  auto a = P(sp, "(and (mod 0 3 1) (ge 1 1))");
  gen::Engine rng(5);
  auto f = gen::stepfn(rng, sp);
  CHECK(f + StepFn::constant(sp, 0) == f);
  CHECK(StepFn::characteristic(a) + StepFn::characteristic(a.complement()) == StepFn::constant(sp, 1));
  auto shifted = StepFn::characteristic(a).map([](const Rational& v) { return v - Rational(1, 8); }).sup_with_const(0);
  CHECK(shifted == StepFn::characteristic(a, R("7/8")));
  CHECK(f.scale(2).norm() == 2 * f.norm());
  CHECK(f.pointwise_max(f.scale(-1)) == f.map([](const Rational& v) { return abs(v); }));
}

TEST_CASE("clamp examples") {
  auto sp = S("w");
  CHECK(clamp_hk(StepFn::constant(sp, -1), 0) == StepFn::constant(sp, 0));
  CHECK(clamp_hk(StepFn::constant(sp, R("1/2")), 0) == StepFn::constant(sp, R("1/2")));
  CHECK(clamp_hk(StepFn::constant(sp, 3), 0) == StepFn::constant(sp, 1));
  CHECK(clamp_hk(R("3/8"), 2) == R("1/4"));
}

TEST_CASE("semi-Borel class examples") {
  auto sp = S("w+1");
  Topology t(sp);
  CHECK(semi_borel_class(StepFn::constant(sp, 4), t) == 1);
  CHECK(usc_check(StepFn::characteristic(PatternSet::singleton(sp, O("w"))), t));
  auto chi = StepFn::characteristic(P(sp, "(lt w)"));
  CHECK_FALSE(usc_check(chi, t));
  CHECK(semi_borel_class(chi, t) == 2);
}

TEST_CASE("monotonize examples") {
  auto sp = S("w+1");
  auto a = P(sp, "(mod 0 2 0)");
  auto chi = StepFn::characteristic(a);
  auto zero = StepFn::constant(sp, 0);

  SUBCASE("target itself") {
    auto p = monotonize_and_diff(chi, {chi, chi, chi});
    CHECK(p.terms[0] == chi);
    CHECK(p.terms[1] == zero);
    CHECK(p.terms[2] == zero);
    CHECK(p.tail_bound == 0);
    auto q = monotonize_and_diff(chi, {chi, chi}, {.strict = true, .shift = ShiftPolicy::Always});
    CHECK(q.terms[0] == StepFn::characteristic(a, R("7/8")));
    CHECK(q.terms[1] == StepFn::characteristic(a, R("1/16")));
    CHECK(q.tail_bound == R("1/16"));
  }
  SUBCASE("two-term approximation, lenient") {
    std::vector<StepFn> ap{chi.scale(R("3/4")), chi};
    CHECK(kind_of([&] { (void)monotonize_and_diff(chi, ap); }) == ErrorKind::CertificateViolation);
    auto p = monotonize_and_diff(chi, ap, {.strict = false, .shift = ShiftPolicy::Always});
    CHECK(p.terms[0] == StepFn::characteristic(a, R("5/8")));
    CHECK(p.terms[1] == StepFn::characteristic(a, R("5/16")));
    CHECK(p.terms[1].min_value() >= 0);
    auto q = monotonize_and_diff(chi, ap, {.strict = false});
    CHECK(q.terms[1] == StepFn::characteristic(a, R("1/4")));
    CHECK(q.tail_bound == 0);
  }
  SUBCASE("non-converging approximation") {
    CHECK(kind_of([&] { (void)monotonize_and_diff(chi, {chi, zero, chi}); }) == ErrorKind::CertificateViolation);
    CHECK(kind_of([&] { (void)monotonize_and_diff(chi, {chi, zero}, {.strict = false}); }) ==
          ErrorKind::CertificateViolation);
  }
  SUBCASE("negative infimum is folded into the base") {
    auto f = chi.map([](const Rational& v) { return v - 3; });
    auto p = monotonize_and_diff(f, {f, f});
    CHECK(p.base == -3);
    CHECK(p.sum() == f);
  }
}

TEST_CASE("sequence families") {
  auto sp = S("w^2");
  // f_n = 1 on {c_0 >= n}, 0 elsewhere.
  SeqFamily fam(sp, {{1, Formula::digit_ge_n(0, 1, 0)}, {0, Formula::negate(Formula::digit_ge_n(0, 1, 0))}});
  std::vector<std::uint64_t> d{5, 1};
  CHECK(fam.eval(d, 5) == 1);
  CHECK(fam.eval(d, 6) == 0);
  CHECK(fam.settle_index(d) == 6);
  CHECK(fam.tail_values(d, 3) == std::vector<Rational>{0, 1});
  CHECK(fam.tail_values(d, 6) == std::vector<Rational>{0});
  CHECK(fam.at(2) == StepFn::characteristic(P(sp, "(ge 0 2)")));

  auto alt = SeqFamily(sp, {{1, Formula::mod_n(2, 0)}, {0, Formula::mod_n(2, 1)}});
  CHECK(alt.period() == 2);
  CHECK(alt.tail_values(d, 100) == std::vector<Rational>{0, 1});
  CHECK(kind_of([&] { SeqFamily(sp, {{1, Formula::mod_n(2, 0)}}); }) == ErrorKind::PartitionViolation);
}

TEST_CASE("property: oscillation bounds and monotonicity") {
  gen::Engine rng(77);
  for (int i = 0; i < 300; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    Topology t(sp);
    auto f = gen::stepfn(rng, sp);
    auto g = t.closure(gen::pattern(rng, sp));
    auto h = t.closure(g.intersect(gen::pattern(rng, sp)));
    if (h.is_empty()) continue;
    for (const auto& x : h.sample_points(4)) {
      const Rational small = oscillation(f, x, h, t), big = oscillation(f, x, g, t);
      REQUIRE(small <= big);
      REQUIRE(big <= 2 * f.norm());
    }
  }
}

TEST_CASE("property: arithmetic keeps the partition invariant") {
  gen::Engine rng(31);
  for (int i = 0; i < 200; ++i) {
    SpaceDesc sp = gen::space(rng, 3, 3);
    auto f = gen::stepfn(rng, sp), g = gen::stepfn(rng, sp);
    for (const StepFn& r : {f + g, f - g, f.pointwise_max(g), clamp_hk(f, 1), f.sup_with_const(0)}) {
      PatternSet cover = PatternSet::none(sp);
      for (const auto& p : r.pieces()) {
        REQUIRE(cover.intersect(p.cell).is_empty());
        cover = cover.unite(p.cell);
      }
      REQUIRE(cover == PatternSet::whole(sp));
      auto x = gen::point(rng, sp);
      REQUIRE((f + g).eval(x) == f.eval(x) + g.eval(x));
    }
  }
}

TEST_CASE("property: presentations of one function agree within their tail bounds") {
  gen::Engine rng(2024);
  for (int i = 0; i < 50; ++i) {
    SpaceDesc sp = gen::space(rng, 2, 4);
    auto f = gen::stepfn(rng, sp);
    std::vector<StepFn> exact(4, f), rough;
    for (unsigned k = 0; k < 4; ++k) {
      const Rational e = pow2_inv(k + 6);
      rough.push_back(f.map([&](const Rational& v) { return v == f.max_value() ? v - e : v; }));
    }
    auto p = monotonize_and_diff(f, exact), q = monotonize_and_diff(f, rough);
    for (int s = 0; s < 20; ++s) {
      auto x = gen::point(rng, sp);
      REQUIRE(abs(p.eval(x) - q.eval(x)) <= p.tail_bound + q.tail_bound);
      REQUIRE(abs(q.eval(x) - f.eval(x)) <= q.tail_bound);
    }
  }
}

}  // TEST_SUITE
