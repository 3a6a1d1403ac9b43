#include "transfinite/altsum.hpp"
#include "transfinite/grid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace transfinite {

namespace {

bool odd(const Ordinal& x) { return !is_even(x); }

Ordinal ord_add(const Ordinal& a, const Ordinal& b) { return add(a, b, kMaxDepthCeiling); }

void collect_offsets(const Formula& f, std::set<Ordinal>& out) {
  std::vector<Ordinal> v;
  f.collect_index_offsets(v);
  out.insert(v.begin(), v.end());
}

std::vector<TransfiniteFamily::Piece> pieces_as_functions(TransfiniteFamily::Kind kind,
                                                          const std::vector<TransfiniteFamily::Piece>& ps) {
  if (kind == TransfiniteFamily::Kind::Functions) return ps;
  return {{Rational(1), ps.front().cell}, {Rational(0), Formula::negate(ps.front().cell)}};
}

[[noreturn]] void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

}  // namespace

Formula rebase_index(const Formula& f, const Ordinal& delta) {
  const auto& nd = f.node();
  switch (nd.op) {
    case Formula::Op::GeParam: return Formula::ge_param(ord_add(nd.ord, delta));
    case Formula::Op::LtParam: return Formula::lt_param(ord_add(nd.ord, delta));
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::vector<Formula> kids;
      for (const auto& k : nd.kids) kids.push_back(rebase_index(k, delta));
      return nd.op == Formula::Op::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case Formula::Op::Not: return Formula::negate(rebase_index(nd.kids.front(), delta));
    default: return f;
  }
}

// ---------------------------------------------------------------- family

TransfiniteFamily::TransfiniteFamily(Kind kind, SpaceDesc space, Ordinal length, std::vector<Segment> segments)
    : kind_(kind), space_(std::move(space)), length_(std::move(length)), segments_(std::move(segments)) {
  Ordinal at;
  for (const auto& s : segments_) {
    if (!(s.from == at)) fail(ErrorKind::InvalidArgument, "segments must tile [0, length); gap or overlap at " + at.str());
    if (!(s.from < s.to)) fail(ErrorKind::InvalidArgument, "empty segment at " + s.from.str());
    if (s.pieces.empty()) fail(ErrorKind::InvalidArgument, "segment at " + s.from.str() + " has no body");
    if (kind_ == Kind::Sets && s.pieces.size() != 1) fail(ErrorKind::InvalidArgument, "set segments have one body");
    for (const auto& p : s.pieces) {
      if (p.cell.has_n_param()) fail(ErrorKind::InvalidArgument, "family bodies cannot use the sequence index n");
    }
    at = s.to;
  }
  if (!(at == length_)) fail(ErrorKind::InvalidArgument, "segments end at " + at.str() + ", not at " + length_.str());
}

TransfiniteFamily TransfiniteFamily::sets(const SpaceDesc& space, const Ordinal& length,
                                          std::vector<std::pair<Ordinal, Formula>> starts) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Ordinal to = i + 1 < starts.size() ? starts[i + 1].first : length;
    segs.push_back({starts[i].first, to, {{Rational(1), starts[i].second}}});
  }
  return TransfiniteFamily(Kind::Sets, space, length, std::move(segs));
}

TransfiniteFamily TransfiniteFamily::finite_sets(const std::vector<PatternSet>& sets) {
  if (sets.empty()) fail(ErrorKind::InvalidArgument, "empty family");
  std::vector<std::pair<Ordinal, Formula>> starts;
  for (std::size_t k = 0; k < sets.size(); ++k) starts.emplace_back(Ordinal::finite(k), sets[k].formula());
  return TransfiniteFamily::sets(sets.front().space(), Ordinal::finite(sets.size()), std::move(starts));
}

TransfiniteFamily TransfiniteFamily::tails(const SpaceDesc& space) {
  return TransfiniteFamily::sets(space, space.bound, {{Ordinal{}, Formula::ge_param(Ordinal{})}});
}

const TransfiniteFamily::Segment* TransfiniteFamily::segment_of(const Ordinal& eta) const {
  for (const auto& s : segments_) {
    if (eta < s.to) return &s;
  }
  return nullptr;
}

namespace {

Rational piece_value(const std::vector<TransfiniteFamily::Piece>& ps, TransfiniteFamily::Kind kind,
                     std::span<const std::uint64_t> digits, const Ordinal& s, const Ordinal& eta) {
  if (kind == TransfiniteFamily::Kind::Sets) return ps.front().cell.eval(digits, s) ? 1 : 0;
  const TransfiniteFamily::Piece* hit = nullptr;
  for (const auto& p : ps) {
    if (p.cell.eval(digits, s)) {
      if (hit) fail(ErrorKind::PartitionViolation, "two pieces of f_" + eta.str() + " contain " + point_of(digits).str());
      hit = &p;
    }
  }
  if (!hit) fail(ErrorKind::PartitionViolation, "no piece of f_" + eta.str() + " contains " + point_of(digits).str());
  return hit->value;
}

}  // namespace

PatternSet TransfiniteFamily::set_at(const Ordinal& eta) const {
  if (kind_ != Kind::Sets) fail(ErrorKind::InvalidArgument, "set_at on a function family");
  const Segment* s = segment_of(eta);
  if (!s) return PatternSet::none(space_);
  return PatternSet::from_formula(space_, s->pieces.front().cell.bind_index(left_subtract(eta, s->from), space_.depth + 1));
}

StepFn TransfiniteFamily::fn_at(const Ordinal& eta) const {
  if (kind_ == Kind::Sets) return StepFn::characteristic(set_at(eta));
  const Segment* s = segment_of(eta);
  if (!s) return StepFn::constant(space_, 0);
  const Ordinal shift = left_subtract(eta, s->from);
  std::vector<StepFn::Piece> out;
  for (const auto& p : s->pieces) out.push_back({p.value, PatternSet::from_formula(space_, p.cell.bind_index(shift, space_.depth + 1))});
  return StepFn(space_, std::move(out));
}

Rational TransfiniteFamily::value(const Ordinal& x, const Ordinal& eta) const {
  const Segment* s = segment_of(eta);
  if (!s) return 0;
  const auto d = x.digits(space_.dims());
  return piece_value(s->pieces, kind_, d, left_subtract(eta, s->from), eta);
}

std::vector<TransfiniteFamily::Step> TransfiniteFamily::profile(const Ordinal& x) const {
  if (!space_.contains(x)) fail(ErrorKind::InvalidArgument, x.str() + " is outside " + space_.str());
  const auto d = x.digits(space_.dims());
  std::vector<Step> out;
  for (const auto& seg : segments_) {
    const Ordinal len = left_subtract(seg.to, seg.from);
    // x >= off + s  iff  s <= x - off, so every index leaf flips at most once,
    // at s = (x - off) + 1.
    std::set<Ordinal> offs;
    for (const auto& p : seg.pieces) collect_offsets(p.cell, offs);
    std::set<Ordinal> cuts{Ordinal{}};
    for (const auto& off : offs) {
      if (off > x) continue;
      const Ordinal tau = ord_add(left_subtract(x, off), Ordinal::finite(1));
      if (tau < len) cuts.insert(tau);
    }
    for (const auto& tau : cuts) {
      const Ordinal eta = ord_add(seg.from, tau);
      const Rational v = piece_value(seg.pieces, kind_, d, tau, eta);
      if (out.empty() || out.back().value != v) out.push_back({eta, v});
    }
  }
  return out;
}

TransfiniteFamily TransfiniteFamily::padded(const Ordinal& length) const {
  if (length < length_) fail(ErrorKind::InvalidArgument, "cannot pad to a shorter length");
  if (length == length_) return *this;
  auto segs = segments_;
  if (kind_ == Kind::Sets) segs.push_back({length_, length, {{Rational(1), Formula::falsity()}}});
  else segs.push_back({length_, length, {{Rational(0), Formula::truth()}}});
  return TransfiniteFamily(kind_, space_, length, std::move(segs));
}

TransfiniteFamily TransfiniteFamily::as_functions() const {
  if (kind_ == Kind::Functions) return *this;
  auto segs = segments_;
  for (auto& s : segs) s.pieces = pieces_as_functions(kind_, s.pieces);
  return TransfiniteFamily(Kind::Functions, space_, length_, std::move(segs));
}

TransfiniteFamily TransfiniteFamily::scaled(const Rational& c) const {
  TransfiniteFamily f = as_functions();
  for (auto& s : f.segments_) {
    std::map<Rational, std::vector<Formula>> by;
    for (const auto& p : s.pieces) by[p.value * c].push_back(p.cell);
    s.pieces.clear();
    for (auto& [v, fs] : by) s.pieces.push_back({v, Formula::disj(std::move(fs))});
  }
  return f;
}

TransfiniteFamily TransfiniteFamily::linear(const std::vector<std::pair<Rational, TransfiniteFamily>>& terms) {
  if (terms.empty()) fail(ErrorKind::InvalidArgument, "empty linear combination");
  const SpaceDesc& space = terms.front().second.space();
  Ordinal length;
  std::set<Ordinal> cuts{Ordinal{}};
  for (const auto& [c, f] : terms) {
    if (!(f.space() == space)) fail(ErrorKind::InvalidArgument, "families live on different spaces");
    length = std::max(length, f.length());
    for (const auto& s : f.segments()) cuts.insert(s.from);
    cuts.insert(f.length());
  }
  cuts.erase(length);
  std::vector<Ordinal> starts(cuts.begin(), cuts.end());
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Ordinal& a = starts[i];
    const Ordinal b = i + 1 < starts.size() ? starts[i + 1] : length;
    std::map<Rational, std::vector<Formula>> acc{{Rational(0), {Formula::truth()}}};
    for (const auto& [c, f] : terms) {
      const Segment* s = f.segment_of(a);
      if (!s) continue;
      const Ordinal delta = left_subtract(a, s->from);
      std::map<Rational, std::vector<Formula>> next;
      for (const auto& p : pieces_as_functions(f.kind(), s->pieces)) {
        const Formula cell = rebase_index(p.cell, delta);
        for (const auto& [v, fs] : acc) next[v + c * p.value].push_back(Formula::conj({Formula::disj(fs), cell}));
      }
      acc = std::move(next);
    }
    std::vector<Piece> pieces;
    for (auto& [v, fs] : acc) pieces.push_back({v, Formula::disj(std::move(fs))});
    segs.push_back({a, b, std::move(pieces)});
  }
  return TransfiniteFamily(Kind::Functions, space, length, std::move(segs));
}

SExpr TransfiniteFamily::to_sexpr() const {
  auto ord = [](const Ordinal& o) { return SExpr::string(o.str()); };
  std::vector<SExpr> items{SExpr::atom("family"), SExpr::list({SExpr::atom("length"), ord(length_)})};
  for (const auto& s : segments_) {
    std::vector<SExpr> seg{SExpr::atom("segment"), SExpr::list({SExpr::atom("from"), ord(s.from)}),
                           SExpr::list({SExpr::atom("to"), ord(s.to)})};
    if (kind_ == Kind::Sets) {
      seg.push_back(SExpr::list({SExpr::atom("set"), s.pieces.front().cell.to_sexpr()}));
    } else {
      for (const auto& p : s.pieces) {
        seg.push_back(SExpr::list({SExpr::atom("piece"), SExpr::atom(to_string(p.value)),
                                   SExpr::list({SExpr::atom("set"), p.cell.to_sexpr()})}));
      }
    }
    items.push_back(SExpr::list(std::move(seg)));
  }
  return SExpr::list(std::move(items));
}

TransfiniteFamily TransfiniteFamily::from_sexpr(const SpaceDesc& space, const SExpr& e) {
  if (e.head() != "family") throw Error(ErrorKind::Parse, e.where() + ": expected (family ...)");
  const unsigned ceiling = space.depth + 1;
  auto field = [&](const SExpr& l, std::string_view name) -> const SExpr& {
    for (const auto& it : l.items) {
      if (it.head() == name && it.items.size() == 2) return it.items[1];
    }
    throw Error(ErrorKind::Parse, l.where() + ": missing (" + std::string(name) + " ...)");
  };
  auto set_body = [&](const SExpr& s) {
    if (s.head() != "set" || s.items.size() != 2) throw Error(ErrorKind::Parse, s.where() + ": expected (set <formula>)");
    return Formula::from_sexpr(s.items[1], ceiling);
  };
  const Ordinal length = Ordinal::parse(field(e, "length").scalar(), ceiling);
  std::optional<Kind> kind;
  std::vector<Segment> segs;
  for (const auto& it : e.items) {
    if (it.head() != "segment") continue;
    Segment s{Ordinal::parse(field(it, "from").scalar(), ceiling), Ordinal::parse(field(it, "to").scalar(), ceiling), {}};
    for (const auto& part : it.items) {
      if (part.head() == "set") {
        if (kind == Kind::Functions) throw Error(ErrorKind::Parse, part.where() + ": mixed set and piece segments");
        kind = Kind::Sets;
        s.pieces.push_back({Rational(1), set_body(part)});
      } else if (part.head() == "piece") {
        if (kind == Kind::Sets) throw Error(ErrorKind::Parse, part.where() + ": mixed set and piece segments");
        if (part.items.size() != 3) throw Error(ErrorKind::Parse, part.where() + ": expected (piece <value> (set ...))");
        kind = Kind::Functions;
        s.pieces.push_back({parse_rational(part.items[1].scalar()), set_body(part.items[2])});
      }
    }
    segs.push_back(std::move(s));
  }
  if (!kind) throw Error(ErrorKind::Parse, e.where() + ": family without segments");
  try {
    return TransfiniteFamily(*kind, space, length, std::move(segs));
  } catch (const Error& err) {
    throw Error(ErrorKind::Parse, e.where() + ": " + err.what());
  }
}

// ---------------------------------------------------------------- probes

std::vector<Ordinal> probe_points(const TransfiniteFamily& fam, std::size_t extra) {
  const SpaceDesc& sp = fam.space();
  const unsigned dims = sp.dims();
  const std::vector<std::uint64_t> vals = dims <= 3 ? std::vector<std::uint64_t>{0, 1, 2, 3, 5} : std::vector<std::uint64_t>{0, 1, 2, 5};
  std::set<Ordinal> out;
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    std::vector<std::uint64_t> d(dims);
    for (unsigned i = 0; i < dims; ++i) d[i] = vals[idx[i]];
    Ordinal x = Ordinal::from_digits(d);
    if (sp.contains(x)) out.insert(std::move(x));
    unsigned i = 0;
    while (i < dims && ++idx[i] == vals.size()) idx[i++] = 0;
    if (i == dims) break;
  }
  std::set<Ordinal> offs;
  for (const auto& s : fam.segments()) {
    for (const auto& p : s.pieces) collect_offsets(p.cell, offs);
  }
  for (const auto& o : offs) {
    for (std::uint64_t k = 0; k < 3; ++k) {
      Ordinal x = ord_add(o, Ordinal::finite(k));
      if (sp.contains(x)) out.insert(std::move(x));
    }
  }
  if (extra > 0) {
    for (auto& x : PatternSet::whole(sp).sample_points(extra)) out.insert(std::move(x));
  }
  return {out.begin(), out.end()};
}

std::vector<Ordinal> probe_indices(const TransfiniteFamily& fam) {
  std::set<Ordinal> out;
  const unsigned width = std::max(1u, fam.length().width());
  for (const auto& s : fam.segments()) {
    std::vector<Ordinal> steps{Ordinal{}};
    for (unsigned e = 1; e < width; ++e) {
      steps.push_back(Ordinal::omega_power(e));
      steps.push_back(Ordinal::omega_power(e, 2));
    }
    for (const auto& st : steps) {
      for (std::uint64_t k = 0; k < 3; ++k) {
        Ordinal eta = ord_add(ord_add(s.from, st), Ordinal::finite(k));
        if (eta < s.to) out.insert(std::move(eta));
      }
    }
    if (classify(s.to) == OrdinalKind::Successor) out.insert(predecessor(s.to));
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------- checks

void verify_set_family(const TransfiniteFamily& fam, const Topology& t) {
  if (fam.kind() != TransfiniteFamily::Kind::Sets) fail(ErrorKind::VerificationError, "not a family of sets");
  if (!(fam.space() == t.space())) fail(ErrorKind::VerificationError, "family and topology live on different spaces");
  const PatternSet f0 = fam.set_at(Ordinal{});
  if (!(f0 == t.whole())) {
    fail(ErrorKind::VerificationError, "F_0 is not the whole space: misses " + t.whole().minus(f0).some_point().str());
  }
  const auto idx = probe_indices(fam);
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const PatternSet grew = fam.set_at(idx[k]).minus(fam.set_at(idx[k - 1]));
    if (!grew.is_empty()) {
      fail(ErrorKind::VerificationError, "decreasing fails: " + grew.some_point().str() + " is in F_" + idx[k].str() +
                                             " but not in F_" + idx[k - 1].str());
    }
  }
  for (const auto& x : probe_points(fam, 16)) {
    const auto prof = fam.profile(x);
    if (prof.size() > 2 || prof.front().value != 1 || (prof.size() == 2 && prof[1].value != 0)) {
      fail(ErrorKind::VerificationError, "decreasing fails at " + x.str() + ": it re-enters the family");
    }
    if (prof.size() == 2 && is_limit(prof[1].start)) {
      fail(ErrorKind::VerificationError, "continuity fails at index " + prof[1].start.str() + ": " + x.str() +
                                             " is in every earlier set but not in F_" + prof[1].start.str());
    }
    if (prof.size() == 1 && is_limit(fam.length())) {
      fail(ErrorKind::VerificationError, "the intersection of all sets contains " + x.str());
    }
  }
}

DUSBSeq verify_dusb(const TransfiniteFamily& fam_in, const Topology& t, unsigned xi, bool vanishing) {
  if (!(fam_in.space() == t.space())) fail(ErrorKind::VerificationError, "family and topology live on different spaces");
  const TransfiniteFamily fam = fam_in.as_functions();
  DUSBSeq out{fam, xi, t, {}};
  Rational top = 0;
  for (const auto& s : fam.segments()) {
    for (const auto& p : s.pieces) {
      if (p.value < 0) {
        fail(ErrorKind::VerificationError, "non-negativity fails: value " + to_string(p.value) + " in the segment from " + s.from.str());
      }
      top = std::max(top, p.value);
    }
  }
  out.certs.push_back("non-negative");
  out.certs.push_back("bounded by " + to_string(top));

  const auto idx = probe_indices(fam);
  std::vector<StepFn> inst;
  for (const auto& eta : idx) inst.push_back(fam.fn_at(eta));
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const StepFn diff = inst[k - 1] - inst[k];
    if (diff.min_value() < 0) {
      const PatternSet where = diff.sublevel(0);
      fail(ErrorKind::VerificationError, "decreasing fails: f_" + idx[k].str() + " > f_" + idx[k - 1].str() + " at " +
                                             where.some_point().str());
    }
  }
  const auto points = probe_points(fam, 16);
  for (const auto& x : points) {
    const auto prof = fam.profile(x);
    for (std::size_t k = 1; k < prof.size(); ++k) {
      if (prof[k].value > prof[k - 1].value) {
        fail(ErrorKind::VerificationError, "decreasing fails at " + x.str() + ": f grows at index " + prof[k].start.str());
      }
    }
    if (vanishing && is_limit(fam.length()) && !prof.empty() && prof.back().value != 0) {
      fail(ErrorKind::VerificationError, "vanishing fails: f_eta(" + x.str() + ") stays at " + to_string(prof.back().value));
    }
  }
  out.certs.push_back("decreasing at " + std::to_string(idx.size()) + " indices and " + std::to_string(points.size()) + " points");
  if (vanishing && is_limit(fam.length())) out.certs.push_back("vanishing towards " + fam.length().str());

  for (std::size_t k = 0; k < idx.size(); ++k) {
    const unsigned cls = semi_borel_class(inst[k], t);
    if (cls > xi) {
      fail(ErrorKind::VerificationError, "f_" + idx[k].str() + " has semi-Borel class " + std::to_string(cls) +
                                             ", above " + std::to_string(xi));
    }
  }
  out.certs.push_back("semi-Borel class <= " + std::to_string(xi));
  return out;
}

Rational altsum_eval(const TransfiniteFamily& fam, const Ordinal& x, const Ordinal& theta) {
  if (theta > fam.length()) fail(ErrorKind::InvalidArgument, "theta " + theta.str() + " exceeds the length " + fam.length().str());
  const auto prof = fam.profile(x);
  // On a run [a, b) where f_eta(x) = c the partial sums alternate between
  // two values, so S(b) = S(a) + c (odd(b) - odd(a)); limits take the even
  // partial sums.
  Rational s = 0;
  for (std::size_t k = 0; k < prof.size() && prof[k].start < theta; ++k) {
    const Ordinal b = k + 1 < prof.size() ? std::min(prof[k + 1].start, theta) : theta;
    s += prof[k].value * Rational((odd(b) ? 1 : 0) - (odd(prof[k].start) ? 1 : 0));
  }
  return s;
}

std::optional<Ordinal> exit_index(const TransfiniteFamily& sets, const Ordinal& x) {
  if (sets.kind() != TransfiniteFamily::Kind::Sets) fail(ErrorKind::InvalidArgument, "exit index needs a family of sets");
  for (const auto& st : sets.profile(x)) {
    if (st.value == 0) return st.start;
  }
  return std::nullopt;
}

int exit_parity_eval(const TransfiniteFamily& sets, const Ordinal& x) {
  auto e = exit_index(sets, x);
  if (!e) {
    if (is_limit(sets.length())) fail(ErrorKind::ExitNotFound, x.str() + " lies in every set of the family");
    e = sets.length();
  }
  if (e->is_zero()) fail(ErrorKind::ExitNotFound, x.str() + " is not in F_0");
  if (is_limit(*e)) fail(ErrorKind::ExitNotFound, x.str() + " leaves at the limit " + e->str());
  return is_even(predecessor(*e)) ? 1 : 0;
}

namespace {

// Shape on which per-point quantities of a family are constant: the family's
// own leaves, every threshold an index leaf can cross inside a segment, and
// digit 0 mod 2 for parities.
std::vector<DigitShape> family_shape(const TransfiniteFamily& fam, const std::vector<Ordinal>& extra) {
  const SpaceDesc& sp = fam.space();
  std::vector<DigitShape> shape(sp.dims());
  auto widen = [&](const Ordinal& o) { accumulate_shape(Formula::ord_ge(o), shape); };
  std::set<Ordinal> offs;
  for (const auto& s : fam.segments()) {
    widen(s.from);
    widen(s.to);
    for (const auto& p : s.pieces) {
      accumulate_shape(p.cell, shape);
      collect_offsets(p.cell, offs);
    }
  }
  for (const auto& o : offs) {
    widen(o);
    for (const auto& s : fam.segments()) widen(ord_add(o, left_subtract(s.to, s.from)));
  }
  for (const auto& o : extra) widen(o);
  for (auto& d : shape) d.threshold += 2;
  shape[0].modulus = std::lcm<std::uint64_t>(shape[0].modulus, 2);
  accumulate_shape(Formula::ord_lt(sp.bound), shape);
  return shape;
}

// Evaluates `value` on three points of every cell; disagreement is Undecidable.
template <class V, class Fn>
std::vector<std::pair<V, GridSet>> tabulate_cells(const SpaceDesc& sp, const std::vector<DigitShape>& shape, Fn&& value) {
  const GridSet proto(shape);
  std::map<V, GridSet> by;
  for (std::size_t c = 0; c < proto.cell_count(); ++c) {
    std::optional<V> v;
    for (unsigned which = 0; which < 3; ++which) {
      const auto d = proto.cell_point(c, which);
      const Ordinal x = Ordinal::from_digits(d);
      if (!sp.contains(x)) continue;
      V w = value(x);
      if (v && *v != w) fail(ErrorKind::Undecidable, "value is not constant on the cell of " + point_of(proto.cell_point(c)).str());
      v = std::move(w);
    }
    if (!v) continue;
    auto it = by.try_emplace(*v, shape).first;
    it->second.set(c);
  }
  return {by.begin(), by.end()};
}

StepFn tabulate_fn(const TransfiniteFamily& fam, const std::vector<Ordinal>& extra,
                   const std::function<Rational(const Ordinal&)>& value) {
  const SpaceDesc& sp = fam.space();
  std::vector<StepFn::Piece> pieces;
  for (auto& [v, g] : tabulate_cells<Rational>(sp, family_shape(fam, extra), value)) {
    pieces.push_back({v, PatternSet::from_grid(sp, g)});
  }
  return StepFn(sp, std::move(pieces));
}

}  // namespace

PatternSet exit_set(const TransfiniteFamily& sets, const std::function<bool(const std::optional<Ordinal>&)>& pred,
                    const std::vector<Ordinal>& extra) {
  const SpaceDesc& sp = sets.space();
  PatternSet out = PatternSet::none(sp);
  for (auto& [v, g] : tabulate_cells<bool>(sp, family_shape(sets, extra),
                                           [&](const Ordinal& x) { return pred(exit_index(sets, x)); })) {
    if (v) out = PatternSet::from_grid(sp, g);
  }
  return out;
}

StepFn altsum_fn(const TransfiniteFamily& fam, const Ordinal& theta) {
  return tabulate_fn(fam, {theta}, [&](const Ordinal& x) { return altsum_eval(fam, x, theta); });
}

StepFn infimum_fn(const TransfiniteFamily& fam) {
  return tabulate_fn(fam, {}, [&](const Ordinal& x) {
    const auto prof = fam.profile(x);
    return prof.empty() ? Rational(0) : prof.back().value;
  });
}

PatternSet even_difference_union(const TransfiniteFamily& sets) {
  return exit_set(sets, [](const std::optional<Ordinal>& e) { return e && !e->is_zero() && !is_limit(*e) && is_even(predecessor(*e)); });
}

DUSBSeq build_char_decomposition(const TransfiniteFamily& sets, const Topology& t) {
  verify_set_family(sets, t);
  unsigned xi = 1;
  for (const auto& eta : probe_indices(sets)) {
    if (!t.is_closed(sets.set_at(eta))) xi = 2;
  }
  return verify_dusb(sets, t, xi);
}

std::vector<Level> levels(const StepFn& f) {
  if (f.min_value() < 0) fail(ErrorKind::InvalidArgument, "levels need a non-negative function");
  std::vector<Level> out;
  Rational prev = 0;
  for (const auto& v : f.values()) {
    out.push_back({v, v - prev, f.where([&](const Rational& w) { return w >= v; })});
    prev = v;
  }
  return out;
}

DUSBSeq build_step_decomposition(const StepFn& f, const std::vector<TransfiniteFamily>& per_level, const Topology& t) {
  std::vector<Level> lv;
  for (auto& l : levels(f)) {
    if (l.weight > 0) lv.push_back(std::move(l));
  }
  if (per_level.size() != lv.size()) {
    fail(ErrorKind::WitnessMismatch, std::to_string(lv.size()) + " positive levels but " + std::to_string(per_level.size()) + " witnesses");
  }
  if (lv.empty()) return verify_dusb(TransfiniteFamily::finite_sets({PatternSet::none(f.space())}).as_functions(), t, 1);
  std::vector<std::pair<Rational, TransfiniteFamily>> terms;
  unsigned xi = 1;
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const DUSBSeq d = build_char_decomposition(per_level[i], t);
    xi = std::max(xi, d.xi);
    auto pts = probe_points(per_level[i], 16);
    for (auto& x : lv[i].set.sample_points(8)) pts.push_back(x);
    for (auto& x : lv[i].set.complement().sample_points(8)) pts.push_back(x);
    for (const auto& x : pts) {
      if (exit_parity_eval(per_level[i], x) != (lv[i].set.contains(x) ? 1 : 0)) {
        fail(ErrorKind::WitnessMismatch, "witness for {f >= " + to_string(lv[i].value) + "} is wrong at " + x.str());
      }
    }
    terms.emplace_back(lv[i].weight, per_level[i]);
  }
  const TransfiniteFamily fam = TransfiniteFamily::linear(terms);
  for (const auto& eta : probe_indices(fam)) {
    if (fam.fn_at(eta).norm() > f.norm()) {
      fail(ErrorKind::VerificationError, "||f_" + eta.str() + "|| exceeds ||f|| = " + to_string(f.norm()));
    }
  }
  return verify_dusb(fam, t, xi);
}

TransfiniteFamily layered_witness(const PatternSet& a, const Topology& t) {
  const PatternSet co = a.complement();
  std::vector<PatternSet> seq;
  PatternSet cur = t.whole();
  while (!cur.is_empty()) {
    const PatternSet near_co = t.closure(cur.intersect(co));
    const PatternSet next = near_co.intersect(t.closure(cur.intersect(a)));
    if (next == cur) fail(ErrorKind::VerificationError, "separation derivative of A and its complement does not shrink");
    seq.push_back(cur);
    seq.push_back(cur.intersect(near_co));
    cur = next;
  }
  if (seq.empty()) seq.push_back(cur);
  return TransfiniteFamily::finite_sets(seq);
}

LazyDUSB build_uniform_decomposition(const UniformPresentation& p, const std::vector<DUSBSeq>& per_term) {
  if (per_term.size() != p.terms.size()) {
    fail(ErrorKind::WitnessMismatch, std::to_string(p.terms.size()) + " terms but " + std::to_string(per_term.size()) + " decompositions");
  }
  for (std::size_t k = 0; k < per_term.size(); ++k) {
    const StepFn g = k == 0 ? p.terms[0].map([&](const Rational& v) { return v - p.base; }) : p.terms[k];
    if (k > 0 && g.norm() > pow2_inv(static_cast<unsigned>(k))) {
      fail(ErrorKind::CertificateViolation, "||g^" + std::to_string(k) + "|| exceeds 2^-" + std::to_string(k));
    }
    const auto& fam = per_term[k].fam;
    auto pts = probe_points(fam, 16);
    for (const auto& x : pts) {
      if (altsum_eval(fam, x, fam.length()) != g.eval(x)) {
        fail(ErrorKind::WitnessMismatch, "decomposition of g^" + std::to_string(k) + " is wrong at " + x.str());
      }
    }
  }
  return LazyDUSB{p, per_term};
}

Interval eval_to_precision(const LazyDUSB& l, const Ordinal& x, const Ordinal& theta, const Rational& eps) {
  if (eps <= 0) fail(ErrorKind::InvalidArgument, "precision must be positive");
  std::size_t K = 0;
  while (pow2_inv(static_cast<unsigned>(K)) >= eps / 2) ++K;
  Rational s = l.presentation.base, slack_hi = 0;
  for (std::size_t k = 0; k < l.terms.size(); ++k) {
    const auto& fam = l.terms[k].fam;
    if (k <= K) {
      s += altsum_eval(fam, x, std::min(theta, fam.length()));
    } else {
      slack_hi += l.presentation.terms[k].norm();
    }
  }
  const Rational tb = l.presentation.tail_bound;
  Interval out{s - tb, s + slack_hi + tb};
  if (out.hi - out.lo > eps) {
    fail(ErrorKind::PrecisionUnreachable, "the presentation only determines the value to within " + to_string(out.hi - out.lo));
  }
  return out;
}

std::string LengthCertificate::str() const {
  std::ostringstream os;
  os << "length certificate: length_" << xi << " <= w^" << lambda << " (witness length " << length.str() << ", constant "
     << to_string(constant) << ", " << points_checked << " points, " << indices_checked << " even indices)";
  return os.str();
}

LengthCertificate length_upper_certificate(const StepFn& f, const DUSBSeq& witness, unsigned lambda, const Rational& c) {
  const auto& fam = witness.fam;
  if (!(f.space() == fam.space())) fail(ErrorKind::InvalidArgument, "function and witness live on different spaces");
  if (fam.length() > Ordinal::omega_power(lambda)) {
    fail(ErrorKind::InvalidArgument, "witness length " + fam.length().str() + " exceeds w^" + std::to_string(lambda));
  }
  LengthCertificate cert{lambda, witness.xi, c, fam.length(), 0, 0};
  auto pts = probe_points(fam, 32);
  std::vector<Ordinal> thetas;
  for (const auto& eta : probe_indices(fam)) {
    if (is_even(eta)) thetas.push_back(eta);
  }
  for (const auto& x : pts) {
    const Rational fx = f.eval(x);
    const Rational total = c + altsum_eval(fam, x, fam.length());
    if (total != fx) {
      fail(ErrorKind::ResidualViolation, "f(" + x.str() + ") = " + to_string(fx) + " but the alternating sum gives " + to_string(total));
    }
    for (const auto& th : thetas) {
      const Rational r = fx - c - altsum_eval(fam, x, th);
      if (r < 0 || r > fam.value(x, th)) {
        fail(ErrorKind::ResidualViolation, "residual " + to_string(r) + " at " + x.str() + ", theta " + th.str() +
                                               " is outside [0, f_theta] = [0, " + to_string(fam.value(x, th)) + "]");
      }
    }
  }
  cert.points_checked = pts.size();
  cert.indices_checked = thetas.size();
  return cert;
}

}  // namespace transfinite
