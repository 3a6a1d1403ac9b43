#include <algorithm>

#include "transfinite/derivative.hpp"

namespace transfinite {

namespace {

std::vector<std::uint64_t> digits_at(const SpaceDesc& sp, std::uint64_t b, std::uint64_t d) {
  if (sp.dims() == 1) return {d};
  return {d, b};
}

Rational spread(const SeqFamily& fam, const std::vector<std::uint64_t>& y, std::uint64_t from, std::uint64_t to) {
  Rational lo = fam.eval(y, from), hi = lo;
  for (std::uint64_t k = from + 1; k < to; ++k) {
    const Rational v = fam.eval(y, k);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

OracleSet conv_oracle(const ConvDeriv& c, const OracleSet& f, const std::vector<OracleSet>& cells) {
  constexpr std::uint64_t kN = 40, kFrom = 200, kTo = 260, kHorizon = 600;
  const SpaceDesc& sp = f.space();
  OracleSet out(sp);
  f.for_each_position([&](std::uint64_t b, std::uint64_t d) {
    if (!f.contains(b, d)) return;
    if (spread(c.fam, digits_at(sp, b, d), 300, 400) >= c.eps) {
      out.set(b, d, true);
      return;
    }
    if (d != 0 || b == 0) return;
    const OracleSet* cell = nullptr;
    for (const auto& k : cells) {
      if (k.contains(b, 0)) cell = &k;
    }
    for (std::uint64_t t = kFrom; t < kTo; ++t) {
      if (!f.contains(b - 1, t) || !cell->contains(b - 1, t)) continue;
      if (spread(c.fam, digits_at(sp, b - 1, t), kN, kHorizon) >= c.eps) {
        out.set(b, d, true);
        return;
      }
    }
  });
  return out;
}

}  // namespace

OracleSet oracle_apply(const DerivativeOp& d, const OracleSet& f) {
  std::vector<OracleSet> cells;
  for (const auto& c : d.topology().cells()) cells.push_back(OracleSet::from_pattern(c));
  const auto& v = d.variant();
  if (auto* s = std::get_if<SeparationDeriv>(&v)) {
    return f.intersect(OracleSet::from_pattern(s->a))
        .closure(cells)
        .intersect(f.intersect(OracleSet::from_pattern(s->b)).closure(cells));
  }
  if (auto* o = std::get_if<OscDeriv>(&v)) {
    const auto& ps = o->f.pieces();
    OracleSet out(f.space());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t k = i + 1; k < ps.size(); ++k) {
        if (abs(ps[i].value - ps[k].value) < o->eps) continue;
        out = out.unite(f.intersect(OracleSet::from_pattern(ps[i].cell))
                            .closure(cells)
                            .intersect(f.intersect(OracleSet::from_pattern(ps[k].cell)).closure(cells)));
      }
    }
    return out.intersect(f);
  }
  if (auto* c = std::get_if<ConvDeriv>(&v)) return conv_oracle(*c, f, cells);
  return f.intersect(f.accumulation(cells));
}

OracleTrace oracle_iterate(const DerivativeOp& d, const OracleSet& f0, std::size_t max_steps) {
  OracleTrace tr;
  tr.stages.push_back(f0);
  for (std::size_t k = 0; k <= max_steps; ++k) {
    const OracleSet& cur = tr.stages.back();
    if (cur.empty()) {
      tr.rank.value = Ordinal::finite(k);
      return tr;
    }
    OracleSet next = oracle_apply(d, cur);
    if (next == cur) {
      tr.fixpoint = true;
      return tr;
    }
    tr.stages.push_back(std::move(next));
  }
  throw Error(ErrorKind::BudgetExceeded, "oracle iteration did not settle");
}

}  // namespace transfinite
