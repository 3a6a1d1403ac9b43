#include "transfinite/functions.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>

namespace transfinite {

Rational parse_rational(std::string_view text) {
  auto num = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(num(text));
  const std::int64_t q = num(text.substr(slash + 1));
  if (q == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num(text.substr(0, slash)), q);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational abs(const Rational& r) { return r < 0 ? -r : r; }

Rational pow2_inv(unsigned k) {
  if (k > 60) throw Error(ErrorKind::InvalidArgument, "2^-k underflows for k = " + std::to_string(k));
  return Rational(1, std::int64_t{1} << k);
}

// ---------------------------------------------------------------- StepFn

StepFn::StepFn(const SpaceDesc& space, std::vector<Piece> pieces) : space_(space) {
  std::map<Rational, PatternSet> merged;
  PatternSet covered = PatternSet::none(space);
  for (auto& p : pieces) {
    if (!(p.cell.space() == space)) throw Error(ErrorKind::InvalidArgument, "piece lives on another space");
    if (p.cell.is_empty()) continue;
    const PatternSet overlap = covered.intersect(p.cell);
    if (!overlap.is_empty()) {
      throw Error(ErrorKind::PartitionViolation,
                  "cells overlap at " + overlap.some_point().str() + " (value " + to_string(p.value) + ")");
    }
    covered = covered.unite(p.cell);
    auto it = merged.find(p.value);
    if (it == merged.end()) {
      merged.emplace(p.value, p.cell);
    } else {
      it->second = it->second.unite(p.cell);
    }
  }
  const PatternSet missing = PatternSet::whole(space).minus(covered);
  if (!missing.is_empty()) {
    throw Error(ErrorKind::PartitionViolation, "no cell contains " + missing.some_point().str());
  }
  for (auto& [v, c] : merged) pieces_.push_back({v, std::move(c)});
}

StepFn StepFn::constant(const SpaceDesc& space, Rational c) {
  return StepFn(space, {{c, PatternSet::whole(space)}});
}

StepFn StepFn::characteristic(const PatternSet& a, Rational v) {
  return StepFn(a.space(), {{v, a}, {Rational(0), a.complement()}});
}

std::vector<Rational> StepFn::values() const {
  std::vector<Rational> out;
  for (const auto& p : pieces_) out.push_back(p.value);
  return out;
}

Rational StepFn::eval(const Ordinal& x) const {
  if (!space_.contains(x)) throw Error(ErrorKind::InvalidArgument, x.str() + " is outside " + space_.str());
  auto d = x.digits(space_.dims());
  return eval_digits(d);
}

Rational StepFn::eval_digits(std::span<const std::uint64_t> digits) const {
  const Piece* hit = nullptr;
  for (const auto& p : pieces_) {
    if (p.cell.contains_digits(digits)) {
      if (hit) throw Error(ErrorKind::PartitionViolation, "two cells contain " + point_of(digits).str());
      hit = &p;
    }
  }
  if (!hit) throw Error(ErrorKind::PartitionViolation, "no cell contains " + point_of(digits).str());
  return hit->value;
}

Rational StepFn::norm() const { return std::max(abs(min_value()), abs(max_value())); }

PatternSet StepFn::where(const std::function<bool(const Rational&)>& pred) const {
  PatternSet out = PatternSet::none(space_);
  for (const auto& p : pieces_) {
    if (pred(p.value)) out = out.unite(p.cell);
  }
  return out;
}

StepFn StepFn::map(const std::function<Rational(const Rational&)>& fn) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({fn(p.value), p.cell});
  return StepFn(space_, std::move(out));
}

StepFn StepFn::combine(const StepFn& a, const StepFn& b,
                       const std::function<Rational(const Rational&, const Rational&)>& op) {
  if (!(a.space_ == b.space_)) throw Error(ErrorKind::InvalidArgument, "functions live on different spaces");
  std::vector<Piece> out;
  for (const auto& p : a.pieces_) {
    for (const auto& q : b.pieces_) {
      PatternSet c = p.cell.intersect(q.cell);
      if (!c.is_empty()) out.push_back({op(p.value, q.value), std::move(c)});
    }
  }
  return StepFn(a.space_, std::move(out));
}

StepFn StepFn::operator+(const StepFn& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return x + y; });
}
StepFn StepFn::operator-(const StepFn& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return x - y; });
}
StepFn StepFn::scale(const Rational& c) const {
  return map([&](const Rational& v) { return v * c; });
}
StepFn StepFn::sup_with_const(const Rational& c) const {
  return map([&](const Rational& v) { return std::max(v, c); });
}
StepFn StepFn::pointwise_max(const StepFn& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return std::max(x, y); });
}
StepFn StepFn::restrict_to(const PatternSet& a) const {
  return combine(*this, characteristic(a), [](const Rational& x, const Rational& y) { return x * y; });
}

bool StepFn::operator==(const StepFn& o) const {
  if (!(space_ == o.space_) || pieces_.size() != o.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].value != o.pieces_[i].value || !(pieces_[i].cell == o.pieces_[i].cell)) return false;
  }
  return true;
}

SExpr StepFn::to_sexpr() const {
  std::vector<SExpr> items{SExpr::atom("stepfn")};
  for (const auto& p : pieces_) {
    items.push_back(SExpr::list({SExpr::atom("piece"), SExpr::atom(to_string(p.value)),
                                 SExpr::list({SExpr::atom("set"), p.cell.formula().to_sexpr()})}));
  }
  return SExpr::list(std::move(items));
}

Rational distance(const StepFn& a, const StepFn& b) { return (a - b).norm(); }

Rational oscillation(const StepFn& f, const Ordinal& x, const PatternSet& F, const Topology& t) {
  if (!F.contains(x)) throw Error(ErrorKind::InvalidArgument, x.str() + " is not in F");
  std::optional<Rational> lo, hi;
  for (const auto& p : f.pieces()) {
    const PatternSet part = p.cell.intersect(F);
    if (part.is_empty()) continue;
    if (!t.closure(part).contains(x)) continue;
    lo = lo ? std::min(*lo, p.value) : p.value;
    hi = hi ? std::max(*hi, p.value) : p.value;
  }
  return lo ? *hi - *lo : Rational(0);
}

unsigned semi_borel_class(const StepFn& f, const Topology& t) {
  const auto vals = f.values();
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const Rational c = (vals[i] + vals[i + 1]) / 2;
    if (!t.is_open(f.sublevel(c))) return 2;
  }
  return 1;
}

Rational clamp_hk(const Rational& v, unsigned k) {
  const Rational top = pow2_inv(k);
  if (v < 0) return 0;
  return v > top ? top : v;
}

StepFn clamp_hk(const StepFn& g, unsigned k) {
  return g.map([k](const Rational& v) { return clamp_hk(v, k); });
}

// ------------------------------------------------------------- SeqFamily

namespace {

struct NLeaves {
  std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>> ge;  // digit, a, b
  std::uint64_t period = 1;
  std::uint64_t stable = 0;
};

void collect_n(const Formula& f, NLeaves& out) {
  const auto& nd = f.node();
  switch (nd.op) {
    case Formula::Op::DigitGeN: out.ge.emplace_back(nd.digit, nd.a, nd.b); break;
    case Formula::Op::ModN: out.period = std::lcm(out.period, nd.a); break;
    case Formula::Op::GeN: out.stable = std::max(out.stable, nd.a); break;
    default: break;
  }
  for (const auto& k : nd.kids) collect_n(k, out);
}

}  // namespace

SeqFamily::SeqFamily(const SpaceDesc& space, std::vector<Piece> pieces) : space_(space), pieces_(std::move(pieces)) {
  NLeaves leaves;
  shape_.assign(space_.dims(), DigitShape{});
  for (const auto& p : pieces_) {
    if (p.cell.has_index_param()) throw Error(ErrorKind::InvalidArgument, "sequence cells cannot use index parameters");
    collect_n(p.cell, leaves);
    accumulate_shape(p.cell, shape_);
  }
  period_ = leaves.period;
  stable_from_ = leaves.stable;
  validate();
}

void SeqFamily::validate() const {
  // Past every offset b and modulus the order of the thresholds a*n + b is
  // fixed and their gaps hold every residue, so the combinatorial type of the
  // partition is periodic in n from there on.
  NLeaves leaves;
  for (const auto& p : pieces_) collect_n(p.cell, leaves);
  std::uint64_t reach = stable_from_;
  for (const auto& [i, a, b] : leaves.ge) reach = std::max(reach, b);
  std::uint64_t mod = 1;
  for (const auto& s : shape_) mod = std::max({mod, s.modulus, s.threshold});
  for (std::uint64_t n = 0; n <= reach + mod + 2 * period_ + 2; ++n) {
    try {
      (void)at(n);
    } catch (const Error& e) {
      throw Error(e.kind(), "sequence member n = " + std::to_string(n) + ": " + e.what());
    }
  }
}

SeqFamily SeqFamily::constant(const StepFn& f) {
  std::vector<Piece> pieces;
  for (const auto& p : f.pieces()) pieces.push_back({p.value, p.cell.formula()});
  return SeqFamily(f.space(), std::move(pieces));
}

SeqFamily SeqFamily::gated(const StepFn& f, const Formula& gate) {
  std::vector<Piece> pieces;
  for (const auto& p : f.pieces()) pieces.push_back({p.value, Formula::conj({p.cell.formula(), gate})});
  pieces.push_back({Rational(0), Formula::negate(gate)});
  return SeqFamily(f.space(), std::move(pieces));
}

std::vector<Rational> SeqFamily::values() const {
  std::set<Rational> vs;
  for (const auto& p : pieces_) vs.insert(p.value);
  return {vs.begin(), vs.end()};
}

StepFn SeqFamily::at(std::uint64_t n) const {
  std::vector<StepFn::Piece> out;
  for (const auto& p : pieces_) out.push_back({p.value, PatternSet::from_formula(space_, p.cell.bind_n(n))});
  return StepFn(space_, std::move(out));
}

Rational SeqFamily::eval(std::span<const std::uint64_t> digits, std::uint64_t n) const {
  for (const auto& p : pieces_) {
    if (p.cell.eval(digits, std::nullopt, n)) return p.value;
  }
  throw Error(ErrorKind::PartitionViolation,
              "no piece of the sequence contains " + point_of(digits).str() + " at n = " + std::to_string(n));
}

std::vector<std::uint64_t> SeqFamily::breakpoints(std::span<const std::uint64_t> digits, std::uint64_t from) const {
  NLeaves leaves;
  for (const auto& p : pieces_) collect_n(p.cell, leaves);
  std::set<std::uint64_t> bp{from};
  for (const auto& [i, a, b] : leaves.ge) {
    const std::uint64_t c = i < digits.size() ? digits[i] : 0;
    if (c < b) continue;
    const std::uint64_t flip = (c - b) / a + 1;  // first n with a*n + b > c
    if (flip > from) bp.insert(flip);
  }
  if (leaves.stable > from) bp.insert(leaves.stable);
  return {bp.begin(), bp.end()};
}

std::uint64_t SeqFamily::settle_index(std::span<const std::uint64_t> digits) const {
  return breakpoints(digits, 0).back();
}

std::vector<Rational> SeqFamily::tail_values(std::span<const std::uint64_t> digits, std::uint64_t n) const {
  const auto bp = breakpoints(digits, n);
  std::set<Rational> vs;
  for (std::size_t k = 0; k < bp.size(); ++k) {
    const std::uint64_t start = bp[k];
    std::uint64_t stop = start + period_;
    if (k + 1 < bp.size()) stop = std::min(stop, bp[k + 1]);
    for (std::uint64_t m = start; m < stop; ++m) vs.insert(eval(digits, m));
  }
  return {vs.begin(), vs.end()};
}

SeqFamily SeqFamily::map(const std::function<Rational(const Rational&)>& fn) const {
  std::map<Rational, std::vector<Formula>> by;
  for (const auto& p : pieces_) by[fn(p.value)].push_back(p.cell);
  std::vector<Piece> out;
  for (auto& [v, fs] : by) out.push_back({v, Formula::disj(std::move(fs))});
  return SeqFamily(space_, std::move(out));
}

SeqFamily SeqFamily::combine(const SeqFamily& a, const SeqFamily& b,
                             const std::function<Rational(const Rational&, const Rational&)>& op) {
  if (!(a.space_ == b.space_)) throw Error(ErrorKind::InvalidArgument, "sequences live on different spaces");
  std::map<Rational, std::vector<Formula>> by;
  for (const auto& p : a.pieces_) {
    for (const auto& q : b.pieces_) by[op(p.value, q.value)].push_back(Formula::conj({p.cell, q.cell}));
  }
  std::vector<Piece> out;
  for (auto& [v, fs] : by) out.push_back({v, Formula::disj(std::move(fs))});
  return SeqFamily(a.space_, std::move(out));
}

SeqFamily SeqFamily::operator+(const SeqFamily& o) const {
  return combine(*this, o, [](const Rational& x, const Rational& y) { return x + y; });
}

SExpr SeqFamily::to_sexpr(const std::string& name) const {
  std::vector<SExpr> items{SExpr::atom("seq"), SExpr::atom(name)};
  for (const auto& p : pieces_) {
    items.push_back(SExpr::list({SExpr::atom("piece"), SExpr::atom(to_string(p.value)),
                                 SExpr::list({SExpr::atom("set"), p.cell.to_sexpr()})}));
  }
  return SExpr::list(std::move(items));
}

// ---------------------------------------------------- UniformPresentation

Rational UniformPresentation::partial_sum(const Ordinal& x, std::size_t upto) const {
  Rational s = 0;
  for (std::size_t k = 0; k < upto && k < terms.size(); ++k) s += terms[k].eval(x);
  return s;
}

StepFn UniformPresentation::sum() const {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty presentation");
  StepFn s = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) s = s + terms[k];
  return s;
}

UniformPresentation monotonize_and_diff(const StepFn& target, const std::vector<StepFn>& approx,
                                        const MonotonizeOptions& opts) {
  if (approx.empty()) throw Error(ErrorKind::CertificateViolation, "no approximations supplied");
  const Rational inf = target.min_value();
  const StepFn f = target.map([&](const Rational& v) { return v - inf; });
  std::vector<StepFn> fk;
  std::optional<Rational> prev_err;
  for (std::size_t k = 0; k < approx.size(); ++k) {
    StepFn a = approx[k].map([&](const Rational& v) { return v - inf; });
    const Rational err = distance(a, f);
    if (opts.strict && err > pow2_inv(static_cast<unsigned>(k) + 5)) {
      throw Error(ErrorKind::CertificateViolation, "approximation " + std::to_string(k) + " is " + to_string(err) +
                                                       " from the target, above 2^-" + std::to_string(k + 5));
    }
    if (prev_err && err > *prev_err) {
      throw Error(ErrorKind::CertificateViolation, "approximation " + std::to_string(k) + " moves away from the target");
    }
    prev_err = err;
    fk.push_back(std::move(a));
  }

  auto increasing_nonneg = [](const std::vector<StepFn>& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].min_value() < 0) return false;
      if (k > 0 && (s[k] - s[k - 1]).min_value() < 0) return false;
    }
    return true;
  };
  if (opts.shift == ShiftPolicy::Always || !increasing_nonneg(fk)) {
    for (std::size_t k = 0; k < fk.size(); ++k) {
      const Rational d = pow2_inv(static_cast<unsigned>(k) + 3);
      fk[k] = fk[k].map([&](const Rational& v) { return std::max(v - d, Rational(0)); });
    }
  }
  for (std::size_t k = 0; k < fk.size(); ++k) {
    if (fk[k].min_value() < 0) {
      throw Error(ErrorKind::CertificateViolation, "shifted approximation " + std::to_string(k) + " is negative");
    }
    if (k > 0 && (fk[k] - fk[k - 1]).min_value() < 0) {
      throw Error(ErrorKind::CertificateViolation, "shifted approximations decrease at index " + std::to_string(k));
    }
    if (opts.strict && distance(fk[k], f) > pow2_inv(static_cast<unsigned>(k) + 2)) {
      throw Error(ErrorKind::CertificateViolation,
                  "shifted approximation " + std::to_string(k) + " is further than 2^-" + std::to_string(k + 2));
    }
  }

  UniformPresentation p;
  p.base = inf;
  p.terms.push_back(fk[0].map([&](const Rational& v) { return v + inf; }));
  for (std::size_t k = 1; k < fk.size(); ++k) {
    StepFn g = fk[k] - fk[k - 1];
    if (g.norm() > pow2_inv(static_cast<unsigned>(k))) {
      throw Error(ErrorKind::CertificateViolation,
                  "difference g^" + std::to_string(k) + " has norm " + to_string(g.norm()) + " above 2^-" + std::to_string(k));
    }
    p.terms.push_back(std::move(g));
  }
  p.tail_bound = distance(p.sum(), target);
  return p;
}

}  // namespace transfinite
