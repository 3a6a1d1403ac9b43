// Python bindings: ordinals, pattern sets, step functions, ranks, fixtures
// and the reproduction suites.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "transfinite/fixture.hpp"
#include "transfinite/pseudouniform.hpp"
#include "transfinite/reproduce.hpp"

namespace py = pybind11;
using namespace transfinite;

namespace {

// Rationals cross the boundary as "p/q" strings; the package wraps them in
// fractions.Fraction.
std::string rat(const Rational& r) { return to_string(r); }

py::object rank_value(const RankValue& v) {
  if (!v.value) return py::none();
  return py::cast(*v.value);
}

}  // namespace

PYBIND11_MODULE(_transfinite, m) {
  m.doc() = "Ranks and alternating-sum decompositions of step functions on countable ordinals.";

  static py::exception<Error> error(m, "TransfiniteError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<Ordinal>(m, "Ordinal")
      .def(py::init([](const std::string& s) { return Ordinal::parse(s, kMaxDepthCeiling); }), py::arg("text"))
      .def(py::init([](std::uint64_t n) { return Ordinal::finite(n); }), py::arg("n"))
      .def_static("omega_power", &Ordinal::omega_power, py::arg("exponent"), py::arg("coefficient") = 1)
      .def_property_readonly("is_finite", &Ordinal::is_finite)
      .def_property_readonly("is_limit", [](const Ordinal& a) { return is_limit(a); })
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def("__hash__", [](const Ordinal& a) { return py::hash(py::str(a.str())); })
      .def("__str__", &Ordinal::str)
      .def("__repr__", [](const Ordinal& a) { return "Ordinal('" + a.str() + "')"; });
  py::implicitly_convertible<py::str, Ordinal>();
  py::implicitly_convertible<py::int_, Ordinal>();

  py::class_<SpaceDesc>(m, "Space")
      .def(py::init([](const Ordinal& bound, unsigned depth) { return SpaceDesc(bound, depth); }), py::arg("bound"),
           py::arg("depth") = kDefaultDepthCeiling)
      .def_readonly("bound", &SpaceDesc::bound)
      .def_readonly("depth", &SpaceDesc::depth)
      .def("__contains__", &SpaceDesc::contains)
      .def("__str__", &SpaceDesc::str);

  py::class_<Topology>(m, "Topology")
      .def(py::init<SpaceDesc>(), py::arg("space"))
      .def("refine", [](const Topology& t, const std::vector<PatternSet>& sets, unsigned xi) { return t.refine(sets, xi); },
           py::arg("sets"), py::arg("xi") = 1)
      .def("closure", &Topology::closure)
      .def("is_open", &Topology::is_open)
      .def("is_closed", &Topology::is_closed)
      .def("cb_derivative", &Topology::cb_derivative);

  py::class_<PatternSet>(m, "PatternSet")
      .def(py::init(&PatternSet::parse), py::arg("space"), py::arg("formula"))
      .def("__contains__", &PatternSet::contains)
      .def("complement", &PatternSet::complement)
      .def("is_empty", &PatternSet::is_empty)
      .def(py::self == py::self)
      .def("__str__", &PatternSet::str)
      .def("__repr__", [](const PatternSet& s) { return "PatternSet('" + s.str() + "')"; });

  py::class_<StepFn>(m, "StepFn")
      .def(py::init([](const SpaceDesc& sp, const std::string& text) {
             return stepfn_from_sexpr(sp, parse_sexprs(text).at(0));
           }),
           py::arg("space"), py::arg("sexpr"))
      .def("_eval", [](const StepFn& f, const Ordinal& x) { return rat(f.eval(x)); })
      .def("_values", [](const StepFn& f) {
        std::vector<std::string> out;
        for (const auto& v : f.values()) out.push_back(rat(v));
        return out;
      })
      .def(py::self == py::self)
      .def("__str__", &StepFn::str);

  py::class_<SeqFamily>(m, "SeqFamily")
      .def(py::init([](const SpaceDesc& sp, const std::string& text) {
             return seq_from_sexpr(sp, parse_sexprs(text).at(0));
           }),
           py::arg("space"), py::arg("sexpr"));

  py::class_<TransfiniteFamily>(m, "Family")
      .def(py::init([](const SpaceDesc& sp, const std::string& text) {
             return TransfiniteFamily::from_sexpr(sp, parse_sexprs(text).at(0));
           }),
           py::arg("space"), py::arg("sexpr"))
      .def_static("tails", &TransfiniteFamily::tails, py::arg("space"))
      .def_property_readonly("length", &TransfiniteFamily::length)
      .def("even_difference_union", [](const TransfiniteFamily& f) { return even_difference_union(f); })
      .def("__str__", [](const TransfiniteFamily& f) { return to_string(f.to_sexpr()); });

  py::class_<RankReport>(m, "RankReport")
      .def_property_readonly("kind", [](const RankReport& r) { return std::string(to_string(r.kind)); })
      .def_property_readonly("value", [](const RankReport& r) { return rank_value(r.value); })
      .def_readonly("parameter", &RankReport::parameter)
      .def_property_readonly("stages", [](const RankReport& r) {
        std::vector<std::pair<Ordinal, PatternSet>> out;
        for (const auto& s : r.trace.stages) out.emplace_back(s.index, s.set);
        return out;
      })
      .def("pseudouniform", &RankReport::pseudouniform)
      .def("__str__", [](const RankReport& r) { return r.str(); });

  m.def("alpha_pair", [](const PatternSet& a, const PatternSet& b, const Topology& t) { return alpha_pair(a, b, t); },
        py::arg("a"), py::arg("b"), py::arg("topology"));
  m.def("alpha_fn", [](const StepFn& f, const Topology& t) { return alpha_fn(f, t); }, py::arg("f"), py::arg("topology"));
  m.def("beta", [](const StepFn& f, const Topology& t) { return beta(f, t); }, py::arg("f"), py::arg("topology"));
  m.def("gamma_seq", [](const SeqFamily& s, const Topology& t) { return gamma_seq(s, t); }, py::arg("seq"),
        py::arg("topology"));
  m.def("alpha_xi_verify",
        [](const PatternSet& a, const PatternSet& b, const TransfiniteFamily& fam, unsigned xi, const Topology& t) {
          return alpha_xi_verify(a, b, fam, xi, t).str();
        },
        py::arg("a"), py::arg("b"), py::arg("family"), py::arg("xi"), py::arg("topology"));
  m.def("decompose",
        [](const StepFn& f, const Topology& t) {
          std::vector<TransfiniteFamily> per;
          for (const auto& l : levels(f)) {
            if (l.weight > 0) per.push_back(layered_witness(l.set, t));
          }
          const DUSBSeq d = build_step_decomposition(f, per, t);
          return std::make_pair(d.fam, d.certs);
        },
        py::arg("f"), py::arg("topology"));
  m.def("_altsum", [](const TransfiniteFamily& fam, const Ordinal& x) { return rat(altsum_eval(fam, x, fam.length())); },
        py::arg("family"), py::arg("x"));
  m.def("phi_generate",
        [](const PatternSet& a, const TransfiniteFamily& sep, unsigned lambda, const Topology& t) {
          const PhiWitness w = phi_generate(a, sep, lambda, t);
          return std::make_pair(w.pseudo.gamma.value.str(), w.checks);
        },
        py::arg("a"), py::arg("family"), py::arg("lam"), py::arg("topology"));

  py::class_<Fixture>(m, "Fixture")
      .def_static("parse", &Fixture::parse, py::arg("text"))
      .def_static("load", &Fixture::load, py::arg("path"))
      .def_property_readonly("space", &Fixture::space)
      .def_property_readonly("topology", &Fixture::topology)
      .def_property_readonly("names", [](const Fixture& fx) {
        std::vector<std::string> out;
        for (const auto& e : fx.entries()) out.push_back(e.name);
        return out;
      })
      .def("set", &Fixture::set)
      .def("fn", &Fixture::fn)
      .def("family", &Fixture::family)
      .def("seq", &Fixture::seq)
      .def("print", &Fixture::print);

  m.def("suite_names", [] {
    std::vector<std::string> out(suite_names().begin(), suite_names().end());
    return out;
  });
  m.def("run_suite", [](const std::string& name) {
    const SuiteReport r = run_suite(name);
    std::vector<std::tuple<std::string, std::string, bool, std::string>> checks;
    for (const auto& c : r.checks) checks.emplace_back(c.criterion, c.name, c.passed, c.detail);
    return checks;
  });
}
