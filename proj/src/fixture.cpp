#include "transfinite/fixture.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace transfinite {

namespace {

[[noreturn]] void parse_fail(const SExpr& at, const std::string& what) {
  throw Error(ErrorKind::Parse, at.where() + ": " + what);
}

const SExpr* field(const SExpr& l, std::string_view name) {
  for (std::size_t i = 1; i < l.items.size(); ++i) {
    if (l.items[i].head() == name) return &l.items[i];
  }
  return nullptr;
}

const SExpr& scalar_field(const SExpr& l, std::string_view name) {
  const SExpr* f = field(l, name);
  if (!f || f->items.size() != 2) parse_fail(l, "missing (" + std::string(name) + " <value>)");
  return f->items[1];
}

unsigned small_natural(const SExpr& e) {
  const auto v = e.as_natural();
  if (v > 1000) parse_fail(e, "value out of range");
  return static_cast<unsigned>(v);
}

std::string name_of(const SExpr& e) {
  if (!e.is_atom()) parse_fail(e, "expected a name");
  return e.text;
}

SExpr list(std::vector<SExpr> items) { return SExpr::list(std::move(items)); }
SExpr atom(std::string s) { return SExpr::atom(std::move(s)); }
SExpr pair(const char* key, SExpr v) { return list({atom(key), std::move(v)}); }

SExpr names(const char* key, const std::vector<std::string>& ns) {
  std::vector<SExpr> items{atom(key)};
  for (const auto& n : ns) items.push_back(atom(n));
  return list(std::move(items));
}

std::vector<std::string> name_list(const SExpr& l, std::string_view key) {
  std::vector<std::string> out;
  if (const SExpr* f = field(l, key)) {
    for (std::size_t i = 1; i < f->items.size(); ++i) out.push_back(name_of(f->items[i]));
  }
  return out;
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

StepFn stepfn_from_sexpr(const SpaceDesc& space, const SExpr& e) {
  if (e.head() != "stepfn") parse_fail(e, "expected (stepfn ...)");
  std::vector<StepFn::Piece> ps;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& p = e.items[i];
    if (p.head() != "piece" || p.items.size() != 3 || p.items[2].head() != "set" || p.items[2].items.size() != 2) {
      parse_fail(p, "expected (piece <value> (set <formula>))");
    }
    ps.push_back({parse_rational(p.items[1].scalar()),
                  PatternSet::from_formula(space, Formula::from_sexpr(p.items[2].items[1], space.depth + 1))});
  }
  try {
    return StepFn(space, std::move(ps));
  } catch (const Error& err) {
    parse_fail(e, err.what());
  }
}

SeqFamily seq_from_sexpr(const SpaceDesc& space, const SExpr& e) {
  if (e.head() != "seq") parse_fail(e, "expected (seq ...)");
  std::vector<SeqFamily::Piece> ps;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& p = e.items[i];
    if (p.head() != "piece" || p.items.size() != 3 || p.items[2].head() != "set" || p.items[2].items.size() != 2) {
      parse_fail(p, "expected (piece <value> (set <formula>))");
    }
    ps.push_back({parse_rational(p.items[1].scalar()), Formula::from_sexpr(p.items[2].items[1], space.depth + 1)});
  }
  try {
    return SeqFamily(space, std::move(ps));
  } catch (const Error& err) {
    parse_fail(e, err.what());
  }
}

Fixture Fixture::parse(std::string_view text) {
  const auto forms = parse_sexprs(text);
  Fixture fx;
  bool have_space = false;
  std::set<std::string> seen;
  for (const auto& f : forms) {
    const auto head = f.head();
    if (head == "space") {
      if (have_space) parse_fail(f, "second (space ...)");
      const unsigned depth = field(f, "depth") ? small_natural(scalar_field(f, "depth")) : kDefaultDepthCeiling;
      try {
        fx.space_ = SpaceDesc(Ordinal::parse(scalar_field(f, "bound").scalar(), std::max(depth + 1, 1u)), depth);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::Parse) throw;
        parse_fail(f, err.what());
      }
      fx.base_ = fx.topology_ = Topology(fx.space_);
      have_space = true;
      continue;
    }
    if (!have_space) parse_fail(f, "the document must start with (space ...)");
    if (head == "refine") {
      if (fx.refinement_) parse_fail(f, "second (refine ...)");
      Refinement r;
      r.xi = field(f, "xi") ? small_natural(scalar_field(f, "xi")) : 1;
      for (std::size_t i = 1; i < f.items.size(); ++i) {
        const SExpr& s = f.items[i];
        if (s.head() != "set") continue;
        if (s.items.size() != 2) parse_fail(s, "expected (set <formula>)");
        r.sets.push_back(PatternSet::from_formula(fx.space_, Formula::from_sexpr(s.items[1], fx.space_.depth + 1)));
      }
      try {
        fx.topology_ = fx.base_.refine(r.sets, r.xi);
      } catch (const Error& err) {
        parse_fail(f, err.what());
      }
      fx.refinement_ = std::move(r);
      continue;
    }
    if (head != "def" || f.items.size() != 3) parse_fail(f, "expected (def <name> <object>), (space ...) or (refine ...)");
    Entry entry{name_of(f.items[1]), PatternSet{}, f.line};
    if (!seen.insert(entry.name).second) parse_fail(f, "'" + entry.name + "' defined twice");
    const SExpr& obj = f.items[2];
    const auto kind = obj.head();
    if (kind == "set") {
      if (obj.items.size() != 2) parse_fail(obj, "expected (set <formula>)");
      entry.value = PatternSet::from_formula(fx.space_, Formula::from_sexpr(obj.items[1], fx.space_.depth + 1));
    } else if (kind == "stepfn") {
      entry.value = stepfn_from_sexpr(fx.space_, obj);
    } else if (kind == "family") {
      entry.value = TransfiniteFamily::from_sexpr(fx.space_, obj);
    } else if (kind == "seq") {
      entry.value = seq_from_sexpr(fx.space_, obj);
    } else if (kind == "separation") {
      SeparationSpec s{name_of(scalar_field(obj, "a")), field(obj, "b") ? name_of(scalar_field(obj, "b")) : "",
                       name_of(scalar_field(obj, "family")), field(obj, "xi") ? small_natural(scalar_field(obj, "xi")) : 1};
      entry.value = s;
    } else if (kind == "witness") {
      WitnessSpec w{name_of(scalar_field(obj, "of")), small_natural(scalar_field(obj, "lambda")),
                    field(obj, "xi") ? small_natural(scalar_field(obj, "xi")) : 1, name_list(obj, "pairs")};
      entry.value = w;
    } else if (kind == "presentation") {
      PresentationSpec p{field(obj, "base") ? parse_rational(scalar_field(obj, "base").scalar()) : Rational(0),
                         parse_rational(scalar_field(obj, "tail").scalar()), name_list(obj, "terms")};
      entry.value = p;
    } else {
      parse_fail(obj, "unknown object kind '" + std::string(kind) + "'");
    }
    fx.entries_.push_back(std::move(entry));
  }
  if (!have_space) throw Error(ErrorKind::Parse, "line 1, column 1: empty document, expected (space ...)");

  // Every reference must resolve to an object of the right kind.
  for (const auto& e : fx.entries_) {
    auto check = [&](const std::string& n, auto probe) {
      try {
        probe(n);
      } catch (const Error& err) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(e.line) + ": in '" + e.name + "': " + err.what());
      }
    };
    std::visit(overloaded{[&](const SeparationSpec& s) {
                            check(s.a, [&](const std::string& n) { (void)fx.set(n); });
                            if (!s.b.empty()) check(s.b, [&](const std::string& n) { (void)fx.set(n); });
                            check(s.family, [&](const std::string& n) { (void)fx.family(n); });
                          },
                          [&](const WitnessSpec& w) {
                            check(w.of, [&](const std::string& n) { (void)fx.fn(n); });
                            for (const auto& p : w.pairs) check(p, [&](const std::string& n) { (void)fx.family(n); });
                          },
                          [&](const PresentationSpec& p) {
                            for (const auto& t : p.terms) check(t, [&](const std::string& n) { (void)fx.fn(n); });
                          },
                          [](const auto&) {}},
               e.value);
  }
  return fx;
}

Fixture Fixture::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const Error& err) {
    throw Error(err.kind(), path + ": " + err.message());
  }
}

const Fixture::Entry* Fixture::find(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

template <class T>
const T& Fixture::get(const std::string& name, const char* what) const {
  const Entry* e = find(name);
  if (!e) throw Error(ErrorKind::Parse, "unknown name '" + name + "'");
  const T* v = std::get_if<T>(&e->value);
  if (!v) throw Error(ErrorKind::Parse, "'" + name + "' is not a " + what);
  return *v;
}

const PatternSet& Fixture::set(const std::string& name) const { return get<PatternSet>(name, "set"); }
const StepFn& Fixture::fn(const std::string& name) const { return get<StepFn>(name, "stepfn"); }
const TransfiniteFamily& Fixture::family(const std::string& name) const { return get<TransfiniteFamily>(name, "family"); }
const SeqFamily& Fixture::seq(const std::string& name) const { return get<SeqFamily>(name, "seq"); }

UniformPresentation Fixture::presentation(const PresentationSpec& p) const {
  UniformPresentation out{p.base, {}, p.tail};
  for (const auto& t : p.terms) out.terms.push_back(fn(t));
  return out;
}

ClassWitness Fixture::class_witness(const WitnessSpec& w) const {
  ClassWitness out;
  for (const auto& p : w.pairs) out.per_pair.push_back(family(p));
  if (refinement_) out.refined = topology_;
  return out;
}

std::vector<SExpr> Fixture::to_sexprs() const {
  std::vector<SExpr> out;
  out.push_back(list({atom("space"), pair("bound", SExpr::string(space_.bound.str())),
                      pair("depth", atom(std::to_string(space_.depth)))}));
  if (refinement_) {
    std::vector<SExpr> r{atom("refine"), pair("xi", atom(std::to_string(refinement_->xi)))};
    for (const auto& s : refinement_->sets) r.push_back(pair("set", s.formula().to_sexpr()));
    out.push_back(list(std::move(r)));
  }
  for (const auto& e : entries_) {
    SExpr obj = std::visit(
        overloaded{[](const PatternSet& s) { return pair("set", s.formula().to_sexpr()); },
                   [](const StepFn& f) { return f.to_sexpr(); },
                   [](const TransfiniteFamily& f) { return f.to_sexpr(); },
                   [](const SeqFamily& f) {
                     SExpr s = f.to_sexpr("");
                     s.items.erase(s.items.begin() + 1);
                     return s;
                   },
                   [](const SeparationSpec& s) {
                     std::vector<SExpr> items{atom("separation"), pair("a", atom(s.a))};
                     if (!s.b.empty()) items.push_back(pair("b", atom(s.b)));
                     items.push_back(pair("family", atom(s.family)));
                     items.push_back(pair("xi", atom(std::to_string(s.xi))));
                     return list(std::move(items));
                   },
                   [](const WitnessSpec& w) {
                     return list({atom("witness"), pair("of", atom(w.of)), pair("lambda", atom(std::to_string(w.lambda))),
                                  pair("xi", atom(std::to_string(w.xi))), names("pairs", w.pairs)});
                   },
                   [](const PresentationSpec& p) {
                     return list({atom("presentation"), pair("base", atom(to_string(p.base))),
                                  pair("tail", atom(to_string(p.tail))), names("terms", p.terms)});
                   }},
        e.value);
    out.push_back(list({atom("def"), atom(e.name), std::move(obj)}));
  }
  return out;
}

std::string Fixture::print() const {
  std::string out;
  for (const auto& e : to_sexprs()) out += pretty(e) + "\n";
  return out;
}

}  // namespace transfinite
