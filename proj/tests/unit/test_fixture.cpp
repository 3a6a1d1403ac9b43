#include <doctest.h>

#include <filesystem>

#include "transfinite/fixture.hpp"
#include "transfinite/gen.hpp"

using namespace transfinite;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Unsupported;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// A random document: sets, step functions, layered families, sequences and
// specs referring to them.
std::string random_document(gen::Engine& rng) {
  const SpaceDesc sp = gen::space(rng, 3, 3);
  const Topology t(sp);
  std::string doc = "(space (bound \"" + sp.bound.str() + "\") (depth " + std::to_string(sp.depth) + "))\n";
  const int n = 1 + static_cast<int>(gen::below(rng, 3));
  for (int i = 0; i < n; ++i) {
    const std::string k = std::to_string(i);
    const PatternSet a = gen::pattern(rng, sp);
    doc += "(def a" + k + " (set " + a.formula().str() + "))\n";
    doc += "(def f" + k + " " + gen::stepfn(rng, sp).str() + ")\n";
    doc += "(def w" + k + " " + to_string(layered_witness(a, t).to_sexpr()) + ")\n";
    SExpr s = gen::seqfamily(rng, sp).to_sexpr("");
    s.items.erase(s.items.begin() + 1);
    doc += "(def s" + k + " " + to_string(s) + ")\n";
    doc += "(def sep" + k + " (separation (a a" + k + ") (family w" + k + ") (xi 1)))\n";
  }
  doc += "(def pres (presentation (base 1/2) (tail 1/8) (terms f0)))\n";
  doc += "(def cls (witness (of f0) (lambda 2) (xi 1) (pairs w0)))\n";
  return doc;
}

}  // namespace

TEST_SUITE("fixture") {
  TEST_CASE("bundled fixtures print to a fixed point") {
    for (const auto& entry : std::filesystem::directory_iterator(TRANSFINITE_FIXTURE_DIR)) {
      if (entry.path().extension() != ".fx") continue;
      CAPTURE(entry.path().string());
      const Fixture fx = Fixture::load(entry.path().string());
      const std::string once = fx.print();
      CHECK(Fixture::parse(once).print() == once);
    }
  }

  TEST_CASE("random documents round trip") {
    gen::Engine rng(515);
    for (int i = 0; i < 40; ++i) {
      const std::string doc = random_document(rng);
      CAPTURE(doc);
      const Fixture a = Fixture::parse(doc);
      const Fixture b = Fixture::parse(a.print());
      CHECK(b.print() == a.print());
      REQUIRE(a.entries().size() == b.entries().size());
      for (std::size_t k = 0; k < a.entries().size(); ++k) {
        const auto& x = a.entries()[k].value;
        const auto& y = b.entries()[k].value;
        if (const auto* s = std::get_if<PatternSet>(&x)) CHECK(*s == std::get<PatternSet>(y));
        if (const auto* f = std::get_if<StepFn>(&x)) CHECK(*f == std::get<StepFn>(y));
      }
    }
  }

  TEST_CASE("refinement is carried into the topology") {
    const Fixture fx = Fixture::parse(R"((space (bound "w^2") (depth 4))
(refine (xi 2) (set (ge 0 1)))
(def succ (set (ge 0 1))))");
    REQUIRE(fx.refinement());
    CHECK(fx.refinement()->xi == 2);
    const PatternSet& succ = fx.set("succ");
    CHECK_FALSE(fx.base().is_closed(succ));
    CHECK(fx.topology().is_closed(succ));
    CHECK(Fixture::parse(fx.print()).print() == fx.print());
  }

  TEST_CASE("parse errors are located") {
    CHECK(kind_of([] { Fixture::parse(""); }) == ErrorKind::Parse);
    CHECK(kind_of([] { Fixture::parse("(def a (set (all)))"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { Fixture::parse("(space (bound \"w\"))\n(def a (set (all)))\n(def a (set (none)))"); }) ==
          ErrorKind::Parse);
    CHECK(kind_of([] { Fixture::parse("(space (bound \"w\"))\n(def s (separation (a x) (family y)))"); }) ==
          ErrorKind::Parse);
    CHECK(kind_of([] { Fixture::parse("(space (bound \"w\"))\n(def a (set (all)))\n(def s (separation (a a) (family a)))"); }) ==
          ErrorKind::Parse);
    CHECK(kind_of([] { Fixture::parse("(space (bound \"w\"))\n(def a (blob))"); }) == ErrorKind::Parse);
    const std::string dup = message_of([] { Fixture::parse("(space (bound \"w\"))\n(def a (set (all)))\n(def a (set (none)))"); });
    CHECK(dup.find("line 3") != std::string::npos);
    const std::string bad = message_of([] { Fixture::parse("(space (bound \"w\"))\n\n(def a (set (eq 0)))"); });
    CHECK(bad.find("line 3") != std::string::npos);
    const std::string gap = message_of([] { Fixture::parse("(space (bound \"w\"))\n(def f (stepfn (piece 1 (set (eq 0 0)))))"); });
    CHECK(gap.find("PartitionViolation") != std::string::npos);
    CHECK(kind_of([] { Fixture::load("/nonexistent.fx"); }) == ErrorKind::Parse);
  }
}
