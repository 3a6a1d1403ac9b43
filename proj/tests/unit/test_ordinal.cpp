#include <doctest.h>

#include "transfinite/gen.hpp"
#include "transfinite/ordinal.hpp"

using namespace transfinite;

namespace {
Ordinal O(const char* s) { return Ordinal::parse(s, kMaxDepthCeiling); }
const Ordinal w = Ordinal::omega();
}  // namespace

TEST_SUITE("ordinal") {

TEST_CASE("compare follows CNF lexicographic order") {
  CHECK(compare(Ordinal{}, w) == std::strong_ordering::less);
  CHECK(compare(O("w*2+1"), O("w*2+1")) == std::strong_ordering::equal);
  CHECK(compare(O("w+5"), O("w^2")) == std::strong_ordering::less);
  CHECK(O("w^2") > O("w*100 + 100"));
  CHECK(O("w^2 + 1") > O("w^2"));
}

TEST_CASE("add and mul") {
  CHECK(add(Ordinal::finite(1), w) == w);
  CHECK(add(w, Ordinal::finite(1)) == O("w+1"));
  CHECK(mul(O("w+4"), w) == O("w^2"));
  CHECK(mul(w, O("w+4")) == O("w^2 + w*4"));
  CHECK(mul(O("w*2+1"), Ordinal::finite(3)) == O("w*6+1"));
  for (std::uint64_t k = 1; k < 8; ++k) {
    CHECK(mul(add(Ordinal::finite(k), Ordinal::finite(4)), w) == w);
  }
  CHECK(add(O("w^2*3 + w + 4"), O("w*2 + 1")) == O("w^2*3 + w*3 + 1"));
}

TEST_CASE("depth ceiling") {
  CHECK_THROWS_AS(mul(O("w^3"), O("w^3"), 6), Error);
  try {
    (void)Ordinal::parse("w^6");
    FAIL("expected DepthExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DepthExceeded);
  }
  CHECK_NOTHROW((void)Ordinal::parse("w^5*2"));
}

TEST_CASE("parity and classification") {
  CHECK(parity(Ordinal{}) == Parity::Even);
  CHECK(parity(w) == Parity::Even);
  CHECK(parity(O("w+3")) == Parity::Odd);
  CHECK(classify(O("w*2+1")) == OrdinalKind::Successor);
  CHECK(classify(O("w^2")) == OrdinalKind::Limit);
  CHECK(classify(Ordinal{}) == OrdinalKind::Zero);
  CHECK(predecessor(O("w+1")) == w);
  CHECK(limit_part(O("w^2+w+7")) == O("w^2+w"));
}

TEST_CASE("fundamental sequences") {
  CHECK(fundamental_sequence(w, 3, true) == Ordinal::finite(6));
  CHECK(fundamental_sequence(O("w^2"), 2) == O("w*2"));
  CHECK(fundamental_sequence(O("w^3*2 + w"), 5) == O("w^3*2 + 5"));
  CHECK(fundamental_sequence(O("w^3*2"), 5) == O("w^3 + w^2*5"));
  CHECK_THROWS_AS(fundamental_sequence(O("w+1"), 1), Error);
}

TEST_CASE("parser and printer round-trip") {
  CHECK(O("w^2*3 + w*1 + 4").str() == "w^2*3 + w + 4");
  CHECK(O("\xCF\x89^2+\xCF\x89") == O("w^2+w"));
  CHECK(O("w^2*3+w+4") == O("w^2*3 + w + 4"));
  CHECK(O("3 + w") == w);
  CHECK(O("0").str() == "0");
  CHECK_THROWS_AS(O("w^"), Error);
  CHECK_THROWS_AS(O("w + x"), Error);
  gen::Engine rng(11);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = gen::ordinal(rng, 5, 40);
    CHECK(Ordinal::parse(a.str()) == a);
  }
}

TEST_CASE("left subtraction") {
  CHECK(left_subtract(O("w^2+3"), w) == O("w^2+3"));
  CHECK(left_subtract(O("w*3+2"), O("w+5")) == O("w*2+2"));
  gen::Engine rng(3);
  for (int i = 0; i < 2000; ++i) {
    Ordinal a = gen::ordinal(rng, 4), b = gen::ordinal(rng, 4);
    if (a > b) std::swap(a, b);
    CHECK(add(a, left_subtract(b, a)) == b);
  }
}

TEST_CASE("property: associativity below w^4") {
  gen::Engine rng(20260415);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = gen::ordinal(rng, 4), b = gen::ordinal(rng, 4), c = gen::ordinal(rng, 4);
    const unsigned cap = kMaxDepthCeiling;
    REQUIRE(add(add(a, b, cap), c, cap) == add(a, add(b, c, cap), cap));
    REQUIRE(mul(mul(a, b, cap), c, cap) == mul(a, mul(b, c, cap), cap));
  }
}

TEST_CASE("property: left monotonicity, parity flip, distributivity") {
  gen::Engine rng(77);
  for (int i = 0; i < 5000; ++i) {
    Ordinal a = gen::ordinal(rng, 4), b = gen::ordinal(rng, 4), c = gen::ordinal(rng, 4);
    if (a < b) REQUIRE(add(c, a) < add(c, b));
    REQUIRE(add(a, b) >= a);
    REQUIRE(parity(add(a, Ordinal::finite(1))) != parity(a));
    REQUIRE(mul(c, add(a, b), kMaxDepthCeiling) ==
            add(mul(c, a, kMaxDepthCeiling), mul(c, b, kMaxDepthCeiling), kMaxDepthCeiling));
  }
}

TEST_CASE("property: fundamental sequences increase to their limit") {
  gen::Engine rng(5);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = gen::ordinal(rng, 4);
    if (!is_limit(a)) continue;
    for (bool even : {false, true}) {
      Ordinal prev;
      for (std::uint64_t n = 1; n < 12; ++n) {
        Ordinal s = fundamental_sequence(a, n, even);
        REQUIRE(s < a);
        if (n > 1) REQUIRE(prev < s);
        if (even) REQUIRE(is_even(s));
        prev = s;
      }
      // Cofinality: every probe below a is eventually passed.
      for (int k = 0; k < 10; ++k) {
        Ordinal probe = gen::ordinal(rng, 4, 9);
        if (probe >= a) continue;
        std::uint64_t n = 1;
        while (fundamental_sequence(a, n, even) <= probe) ++n;
        REQUIRE(n < 200);
      }
    }
  }
}

}  // TEST_SUITE
