// transfinite: ranks, decompositions and verification for fixture files.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "transfinite/fixture.hpp"
#include "transfinite/pseudouniform.hpp"
#include "transfinite/reproduce.hpp"

using namespace transfinite;
using Json = nlohmann::ordered_json;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::DepthExceeded:
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotLimit: return 1;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::Undecidable:
    case ErrorKind::Unsupported: return 3;
    default: return 2;
  }
}

struct Options {
  std::string file;
  std::vector<std::string> names;
  bool trace = false;
  bool json = false;
  std::string target, family;
  unsigned lambda = 0;
  unsigned terms = 4, depth = 3;
  std::string suite;
};

Json trace_json(const IterationTrace& tr) {
  Json stages = Json::array();
  for (const auto& s : tr.stages) stages.push_back({{"stage", s.index.str()}, {"set", s.set.str()}});
  return stages;
}

Json rank_json(const std::string& name, const RankReport& r, bool trace) {
  Json j{{"name", name}, {"rank", std::string(to_string(r.kind))}, {"value", r.value.str()}, {"parameter", r.parameter}};
  Json per = Json::array();
  for (const auto& [p, v] : r.per_parameter) per.push_back({{"parameter", p}, {"value", v.str()}});
  j["per_parameter"] = per;
  if (trace) j["trace"] = trace_json(r.trace);
  return j;
}

bool selected(const Options& o, const std::string& name) {
  return o.names.empty() || std::find(o.names.begin(), o.names.end(), name) != o.names.end();
}

void rank_verb(const Options& o, std::ostream& out) {
  const Fixture fx = Fixture::load(o.file);
  const Topology& t = fx.topology();
  Json all = Json::array();
  for (const auto& e : fx.entries()) {
    if (!selected(o, e.name)) continue;
    std::vector<RankReport> reports;
    if (const auto* a = std::get_if<PatternSet>(&e.value)) {
      reports.push_back(alpha_pair(*a, a->complement(), t));
    } else if (const auto* f = std::get_if<StepFn>(&e.value)) {
      reports.push_back(alpha_fn(*f, t));
      reports.push_back(beta(*f, t));
    } else if (const auto* s = std::get_if<SeqFamily>(&e.value)) {
      reports.push_back(gamma_seq(*s, t));
    } else {
      continue;
    }
    for (const auto& r : reports) {
      if (o.json) {
        all.push_back(rank_json(e.name, r, o.trace));
      } else {
        out << e.name << ": " << r.str(o.trace);
        if (r.kind == RankReport::Kind::GammaSeq) out << "  pseudouniform: " << (r.pseudouniform() ? "yes" : "no") << "\n";
      }
    }
  }
  if (o.json) out << all.dump(2) << "\n";
}

std::vector<TransfiniteFamily> level_witnesses(const Fixture& fx, const std::string& name, const StepFn& f,
                                               unsigned& lambda) {
  const WitnessSpec* spec = nullptr;
  for (const auto& e : fx.entries()) {
    if (const auto* w = std::get_if<WitnessSpec>(&e.value); w && w->of == name) spec = w;
  }
  std::vector<Level> lv;
  for (auto& l : levels(f)) {
    if (l.weight > 0) lv.push_back(std::move(l));
  }
  std::vector<TransfiniteFamily> out;
  if (spec) {
    if (lambda == 0) lambda = spec->lambda;
    std::size_t next = 0;
    for (const auto& l : lv) {
      if (l.set == fx.topology().whole()) {
        out.push_back(TransfiniteFamily::finite_sets({l.set}));
      } else if (next < spec->pairs.size()) {
        out.push_back(fx.family(spec->pairs[next++]));
      } else {
        throw Error(ErrorKind::WitnessMismatch, "witness for '" + name + "' has too few families");
      }
    }
    return out;
  }
  for (const auto& l : lv) out.push_back(layered_witness(l.set, fx.topology()));
  return out;
}

void decompose_verb(const Options& o, std::ostream& out) {
  const Fixture fx = Fixture::load(o.file);
  Json all = Json::array();
  for (const auto& e : fx.entries()) {
    const auto* f = std::get_if<StepFn>(&e.value);
    if (!f || !selected(o, e.name)) continue;
    unsigned lambda = o.lambda;
    const auto per = level_witnesses(fx, e.name, *f, lambda);
    const DUSBSeq d = build_step_decomposition(*f, per, fx.topology());
    if (lambda == 0) {
      lambda = 1;
      while (Ordinal::omega_power(lambda) < d.fam.length()) ++lambda;
    }
    const LengthCertificate c = length_upper_certificate(*f, d, lambda);
    if (o.json) {
      all.push_back({{"name", e.name},
                     {"length", d.fam.length().str()},
                     {"certificates", d.certs},
                     {"length_certificate", c.str()},
                     {"family", to_string(d.fam.to_sexpr())}});
    } else {
      out << e.name << ": decomposition of length " << d.fam.length().str() << "\n";
      for (const auto& s : d.certs) out << "  " << s << "\n";
      out << "  " << c.str() << "\n";
      out << pretty(SExpr::list({SExpr::atom("def"), SExpr::atom(e.name + "-decomposition"), d.fam.to_sexpr()})) << "\n";
    }
  }
  if (o.json) out << all.dump(2) << "\n";
}

void verify_verb(const Options& o, std::ostream& out) {
  const Fixture fx = Fixture::load(o.file);
  const Topology& t = fx.topology();
  const unsigned xi = fx.refinement() ? fx.refinement()->xi : 1;
  Json all = Json::array();
  auto emit = [&](const std::string& name, const std::string& what, const std::vector<std::string>& lines) {
    if (o.json) {
      all.push_back({{"name", name}, {"check", what}, {"certificates", lines}});
      return;
    }
    out << name << ": " << what << "\n";
    for (const auto& l : lines) out << "  " << l << "\n";
  };
  for (const auto& e : fx.entries()) {
    if (!selected(o, e.name)) continue;
    if (const auto* fam = std::get_if<TransfiniteFamily>(&e.value)) {
      if (fam->kind() == TransfiniteFamily::Kind::Sets) {
        verify_set_family(*fam, t);
        emit(e.name, "set family", {"decreasing, continuous, F_0 = X"});
      } else {
        emit(e.name, "DUSB_" + std::to_string(xi), verify_dusb(*fam, fx.base(), xi).certs);
      }
    } else if (const auto* s = std::get_if<SeparationSpec>(&e.value)) {
      const PatternSet& a = fx.set(s->a);
      const PatternSet b = s->b.empty() ? a.complement() : fx.set(s->b);
      emit(e.name, "separation", {alpha_xi_verify(a, b, fx.family(s->family), s->xi, t).str()});
    } else if (const auto* w = std::get_if<WitnessSpec>(&e.value)) {
      const auto c = class_membership(fx.fn(w->of), w->lambda, w->xi, fx.base(), fx.class_witness(*w));
      std::istringstream lines(c.str());
      std::vector<std::string> ls;
      for (std::string l; std::getline(lines, l);) ls.push_back(l);
      emit(e.name, "class membership", ls);
    }
  }
  if (o.json) out << all.dump(2) << "\n";
}

PhiWitness phi_for_set(const Fixture& fx, const PatternSet& a, const TransfiniteFamily& sep, const Options& o) {
  const unsigned lambda = o.lambda == 0 ? 1 : o.lambda;
  if (fx.refinement()) {
    return phi_refined(a, sep, lambda, fx.base(), fx.refinement()->sets, fx.refinement()->xi, o.terms, o.depth);
  }
  return phi_generate(a, sep, lambda, fx.topology(), o.terms, o.depth);
}

void phi_verb(const Options& o, std::ostream& out) {
  const Fixture fx = Fixture::load(o.file);
  const TransfiniteFamily& sep = fx.family(o.family);
  const Fixture::Entry* e = fx.find(o.target);
  if (!e) throw Error(ErrorKind::Parse, "unknown name '" + o.target + "'");
  PhiWitness w;
  if (const auto* a = std::get_if<PatternSet>(&e->value)) {
    w = phi_for_set(fx, *a, sep, o);
  } else if (const auto* f = std::get_if<StepFn>(&e->value)) {
    std::vector<std::pair<Rational, PhiWitness>> pieces;
    for (const auto& l : levels(*f)) {
      if (l.weight > 0) pieces.emplace_back(l.weight, phi_for_set(fx, l.set, sep, o));
    }
    w = phi_step(*f, pieces);
  } else {
    throw Error(ErrorKind::InvalidArgument, "'" + o.target + "' is neither a set nor a stepfn");
  }
  const auto subset = check_phi_subset(w, o.depth);
  if (o.json) {
    Json j{{"target", o.target},
           {"lambda", w.lambda},
           {"xi", w.xi},
           {"gamma", w.pseudo.gamma.value.str()},
           {"checks", w.checks},
           {"pseudouniform", w.pseudo.checks},
           {"subset", subset},
           {"sequence", to_string(w.sequence.to_sexpr(o.target + "-seq"))}};
    Json betas = Json::array();
    for (const auto& b : w.term_beta) betas.push_back(b.str());
    j["term_beta"] = betas;
    if (o.trace) j["trace"] = trace_json(w.pseudo.gamma.trace);
    out << j.dump(2) << "\n";
    return;
  }
  out << w.str();
  for (const auto& s : subset) out << "  " << s << "\n";
  if (o.trace) out << w.pseudo.gamma.trace.log();
  out << pretty(w.sequence.to_sexpr(o.target + "-seq")) << "\n";
}

int reproduce_verb(const Options& o, std::ostream& out) {
  std::vector<std::string_view> which;
  if (o.suite == "all") {
    which = suite_names();
  } else {
    which.push_back(o.suite);
  }
  bool ok = true;
  Json all = Json::array();
  for (const auto& name : which) {
    const SuiteReport r = run_suite(name);
    ok = ok && r.passed();
    if (o.json) {
      Json checks = Json::array();
      for (const auto& c : r.checks) {
        checks.push_back({{"criterion", c.criterion}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      }
      all.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}});
    } else {
      out << r.str();
    }
  }
  if (o.json) out << all.dump(2) << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranks and alternating-sum decompositions of Baire class functions on countable ordinals"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("fixture", o.file, "fixture file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--trace", o.trace, "attach iteration logs");
    sub->add_flag("--json", o.json, "structured output");
  };
  auto* rank = app.add_subcommand("rank", "alpha, beta and gamma of the fixture's objects");
  common(rank);
  rank->add_option("--name", o.names, "only these objects");
  auto* decompose = app.add_subcommand("decompose", "alternating-sum decompositions of step functions");
  common(decompose);
  decompose->add_option("--name", o.names, "only these functions");
  decompose->add_option("--lambda", o.lambda, "length bound w^lambda");
  auto* verify = app.add_subcommand("verify", "check families, separations and class witnesses");
  common(verify);
  verify->add_option("--name", o.names, "only these objects");
  auto* phi = app.add_subcommand("phi", "pseudouniform generation for a set or step function");
  common(phi);
  phi->add_option("--target", o.target, "set or stepfn")->required();
  phi->add_option("--family", o.family, "separation family")->required();
  phi->add_option("--lambda", o.lambda, "lambda (default 1)");
  phi->add_option("--terms", o.terms, "terms checked");
  phi->add_option("--depth", o.depth, "blocks checked");
  auto* reproduce = app.add_subcommand("reproduce", "run a bundled suite");
  std::vector<std::string> choices(suite_names().begin(), suite_names().end());
  choices.push_back("all");
  reproduce->add_option("suite", o.suite, "suite name")->required()->check(CLI::IsMember(choices));
  reproduce->add_flag("--json", o.json, "structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::ostringstream out;
  int status = 0;
  try {
    if (*rank) rank_verb(o, out);
    if (*decompose) decompose_verb(o, out);
    if (*verify) verify_verb(o, out);
    if (*phi) phi_verb(o, out);
    if (*reproduce) status = reproduce_verb(o, out);
  } catch (const Error& e) {
    std::cout << out.str();
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  std::cout << out.str();
  return status;
}
