#include "transfinite/space.hpp"

#include <algorithm>

namespace transfinite {

SpaceDesc::SpaceDesc(Ordinal b, unsigned d) : bound(std::move(b)), depth(d) {
  if (bound.is_zero()) throw Error(ErrorKind::InvalidArgument, "space bound must be positive");
  if (depth == 0 || depth > kMaxDepthCeiling) throw Error(ErrorKind::InvalidArgument, "bad depth");
  if (bound > Ordinal::omega_power(depth)) {
    throw Error(ErrorKind::DepthExceeded, "space bound " + bound.str() + " exceeds w^" + std::to_string(depth));
  }
}

unsigned SpaceDesc::dims() const {
  const auto& t = bound.terms();
  const auto& lead = t.front();
  if (t.size() == 1 && lead.coefficient == 1 && lead.exponent > 0) return lead.exponent;
  return lead.exponent + 1;
}

std::string SpaceDesc::str() const { return "[0, " + bound.str() + ")"; }

Ordinal point_of(std::span<const std::uint64_t> digits) { return Ordinal::from_digits(digits); }

namespace {

GridSet space_grid(const SpaceDesc& space) {
  return GridSet::compile(Formula::ord_lt(space.bound), space.dims()).minimized();
}

}  // namespace

PatternSet PatternSet::from_formula(const SpaceDesc& space, const Formula& f) {
  return from_grid(space, GridSet::compile(f, space.dims()));
}

PatternSet PatternSet::parse(const SpaceDesc& space, std::string_view text) {
  return from_formula(space, Formula::parse(text, space.depth + 1));
}

PatternSet PatternSet::whole(const SpaceDesc& space) { return PatternSet(space, space_grid(space)); }

PatternSet PatternSet::none(const SpaceDesc& space) {
  return PatternSet(space, GridSet(std::vector<DigitShape>(space.dims(), DigitShape{0, 1})));
}

PatternSet PatternSet::from_grid(const SpaceDesc& space, const GridSet& g) {
  if (g.dims() != space.dims()) throw Error(ErrorKind::InvalidArgument, "grid does not match space");
  return PatternSet(space, g.intersect(space_grid(space)));
}

PatternSet PatternSet::singleton(const SpaceDesc& space, const Ordinal& x) {
  std::vector<Formula> eqs;
  for (unsigned i = 0; i < space.dims(); ++i) eqs.push_back(Formula::digit_eq(i, x.digit(i)));
  if (x.width() > space.dims()) return none(space);
  return from_formula(space, Formula::conj(std::move(eqs)));
}

bool PatternSet::contains(const Ordinal& x) const {
  if (x.width() > space_.depth) {
    throw Error(ErrorKind::DepthExceeded, x.str() + " is beyond depth " + std::to_string(space_.depth));
  }
  if (!space_.contains(x)) return false;
  auto d = x.digits(space_.dims());
  return grid_.contains(d);
}

void PatternSet::check_same_space(const PatternSet& o) const {
  if (!(space_ == o.space_)) {
    throw Error(ErrorKind::InvalidArgument, "sets live on different spaces: " + space_.str() + " vs " + o.space_.str());
  }
}

PatternSet PatternSet::unite(const PatternSet& o) const {
  check_same_space(o);
  return PatternSet(space_, grid_.unite(o.grid_));
}
PatternSet PatternSet::intersect(const PatternSet& o) const {
  check_same_space(o);
  return PatternSet(space_, grid_.intersect(o.grid_));
}
PatternSet PatternSet::minus(const PatternSet& o) const {
  check_same_space(o);
  return PatternSet(space_, grid_.minus(o.grid_));
}
PatternSet PatternSet::complement() const { return whole(space_).minus(*this); }

Ordinal PatternSet::some_point() const {
  std::optional<Ordinal> best;
  for (std::size_t c = 0; c < grid_.cell_count(); ++c) {
    if (!grid_.test(c)) continue;
    Ordinal p = point_of(grid_.cell_point(c));
    if (!best || p < *best) best = p;
  }
  if (!best) throw Error(ErrorKind::InvalidArgument, "empty set has no points");
  return *best;
}

std::vector<Ordinal> PatternSet::sample_points(std::size_t count) const {
  std::vector<Ordinal> out;
  for (unsigned which = 0; which < 4 && out.size() < count; ++which) {
    bool any = false;
    for (std::size_t c = 0; c < grid_.cell_count() && out.size() < count; ++c) {
      if (!grid_.test(c)) continue;
      any = true;
      Ordinal p = point_of(grid_.cell_point(c, which));
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    }
    if (!any) break;
  }
  return out;
}

PatternSet base_accumulation(const PatternSet& s) {
  const SpaceDesc& space = s.space();
  const GridSet& g = s.grid();
  const unsigned d = g.dims();
  if (d < 2 || g.empty()) return PatternSet::none(space);

  // good[j][h]: some point of S has the high classes h (digits >= j, with the
  // lower part of the index zeroed), an unbounded digit j-1 and any lower digits.
  std::vector<std::vector<std::uint8_t>> good(d);
  std::vector<std::uint64_t> cls;
  for (unsigned j = 1; j < d; ++j) good[j].assign(g.cell_count(), 0);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (!g.test(c)) continue;
    g.cell_classes(c, cls);
    std::size_t low = 0;
    for (unsigned j = 1; j < d; ++j) {
      low += cls[j - 1] * g.stride(j - 1);
      if (g.is_residue_class(j - 1, cls[j - 1])) good[j][c - low] = 1;
    }
  }

  auto shape = g.shape();
  for (auto& sh : shape) sh.threshold += 1;
  GridSet out(shape);
  for (std::size_t c = 0; c < out.cell_count(); ++c) {
    auto x = out.cell_point(c);
    unsigned j = 0;
    while (j < d && x[j] == 0) ++j;
    if (j == 0 || j == d) continue;
    std::size_t h = g.class_of(j, x[j] - 1) * g.stride(j);
    for (unsigned i = j + 1; i < d; ++i) h += g.class_of(i, x[i]) * g.stride(i);
    if (good[j][h]) out.set(c);
  }
  return PatternSet::from_grid(space, out);
}

std::string_view to_string(BorelClass c) {
  switch (c) {
    case BorelClass::Clopen: return "Clopen";
    case BorelClass::Open: return "Open";
    case BorelClass::Closed: return "Closed";
    case BorelClass::Delta2: return "Delta2";
    case BorelClass::Sigma2OrAbove: return "Sigma2OrAbove";
  }
  return "?";
}

Topology::Topology(SpaceDesc space) : space_(std::move(space)) { cells_.push_back(PatternSet::whole(space_)); }

PatternSet Topology::accumulation(const PatternSet& s) const {
  if (cells_.size() == 1) return base_accumulation(s);
  PatternSet out = PatternSet::none(space_);
  for (const auto& c : cells_) out = out.unite(base_accumulation(s.intersect(c)).intersect(c));
  return out;
}

PatternSet Topology::closure(const PatternSet& s) const { return s.unite(accumulation(s)); }

PatternSet Topology::interior(const PatternSet& s) const { return closure(s.complement()).complement(); }

PatternSet Topology::cb_derivative(const PatternSet& f) const { return f.intersect(accumulation(f)); }

const PatternSet& Topology::cell_of(const Ordinal& x) const {
  for (const auto& c : cells_) {
    if (c.contains(x)) return c;
  }
  throw Error(ErrorKind::InvalidArgument, x.str() + " is not in " + space_.str());
}

BorelClass Topology::borel_class(const PatternSet& s) const {
  const bool closed = is_closed(s);
  const bool open = is_open(s);
  if (closed && open) return BorelClass::Clopen;
  if (open) return BorelClass::Open;
  if (closed) return BorelClass::Closed;
  // A finite run of the separation derivative of (S, X \ S) to the empty set
  // exhibits S as a finite difference of closed sets.
  const PatternSet co = s.complement();
  PatternSet f = whole();
  const unsigned limit = space_.dims() + 2;
  for (unsigned step = 0; step <= limit; ++step) {
    if (f.is_empty()) return BorelClass::Delta2;
    f = closure(f.intersect(s)).intersect(closure(f.intersect(co)));
  }
  throw Error(ErrorKind::Undecidable,
              "set " + s.str() + " has no finite difference representation; this cannot happen in a countable space");
}

Topology Topology::refine(const std::vector<PatternSet>& sets, unsigned xi) const {
  if (xi == 0) throw Error(ErrorKind::InvalidArgument, "xi must be at least 1");
  Topology out = *this;
  for (const auto& p : sets) {
    if (!(p.space() == space_)) throw Error(ErrorKind::InvalidArgument, "declared set lives on another space");
    const BorelClass bc = borel_class(p);
    if (xi == 1 && bc != BorelClass::Clopen) {
      throw Error(ErrorKind::ClassViolation,
                  "declared set " + p.str() + " is " + std::string(to_string(bc)) + ", not Delta^0_1");
    }
    out.declared_.push_back(p);
    std::vector<PatternSet> next;
    for (const auto& c : out.cells_) {
      PatternSet in = c.intersect(p), out_part = c.minus(p);
      if (!in.is_empty()) next.push_back(std::move(in));
      if (!out_part.is_empty()) next.push_back(std::move(out_part));
    }
    out.cells_ = std::move(next);
  }
  return out;
}

std::string Topology::str() const {
  std::string out = space_.str();
  for (const auto& d : declared_) out += " + clopen " + d.str();
  return out;
}

}  // namespace transfinite
