#include "transfinite/derivative.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace transfinite {

DerivativeOp::DerivativeOp(Topology t, Variant v) : t_(std::move(t)), v_(std::move(v)) {
  const SpaceDesc& sp = t_.space();
  auto same = [&](const SpaceDesc& o, const char* what) {
    if (!(o == sp)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " lives on another space");
  };
  auto positive = [](const Rational& e) {
    if (e <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  };
  if (auto* s = std::get_if<SeparationDeriv>(&v_)) {
    same(s->a.space(), "A");
    same(s->b.space(), "B");
  } else if (auto* o = std::get_if<OscDeriv>(&v_)) {
    same(o->f.space(), "f");
    positive(o->eps);
  } else if (auto* c = std::get_if<ConvDeriv>(&v_)) {
    same(c->fam.space(), "the sequence");
    positive(c->eps);
  }
}

DerivativeOp DerivativeOp::separation(const Topology& t, PatternSet a, PatternSet b) {
  return DerivativeOp(t, SeparationDeriv{std::move(a), std::move(b)});
}
DerivativeOp DerivativeOp::oscillation(const Topology& t, StepFn f, Rational eps) {
  return DerivativeOp(t, OscDeriv{std::move(f), eps});
}
DerivativeOp DerivativeOp::convergence(const Topology& t, SeqFamily fam, Rational eps) {
  return DerivativeOp(t, ConvDeriv{std::move(fam), eps});
}
DerivativeOp DerivativeOp::cantor_bendixson(const Topology& t) { return DerivativeOp(t, CantorBendixson{}); }

std::string DerivativeOp::describe() const {
  struct V {
    std::string operator()(const SeparationDeriv& s) const { return "separation " + s.a.str() + " " + s.b.str(); }
    std::string operator()(const OscDeriv& o) const { return "oscillation eps " + to_string(o.eps); }
    std::string operator()(const ConvDeriv& c) const { return "convergence eps " + to_string(c.eps); }
    std::string operator()(const CantorBendixson&) const { return "cantor-bendixson"; }
  };
  return std::visit(V{}, v_);
}

PatternSet DerivativeOp::apply(const PatternSet& f) const {
  if (auto* s = std::get_if<SeparationDeriv>(&v_)) {
    return t_.closure(f.intersect(s->a)).intersect(t_.closure(f.intersect(s->b)));
  }
  if (auto* o = std::get_if<OscDeriv>(&v_)) {
    // x is in D(F) iff two values eps apart both accumulate at x within F.
    const auto& ps = o->f.pieces();
    std::vector<PatternSet> near;
    for (const auto& p : ps) near.push_back(t_.closure(f.intersect(p.cell)));
    PatternSet out = PatternSet::none(t_.space());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t k = i + 1; k < ps.size(); ++k) {
        if (abs(ps[i].value - ps[k].value) >= o->eps) out = out.unite(near[i].intersect(near[k]));
      }
    }
    return out.intersect(f);
  }
  if (auto* c = std::get_if<ConvDeriv>(&v_)) return apply_convergence(*c, f);
  return t_.cb_derivative(f);
}

// ---------------------------------------------------------------- convergence
//
// D(F) = F ∩ (N ∪ ∩_N acc(E_N)) where N is the set of points where (f_n) does
// not converge by eps and E_N = {y in F : |f_m(y) - f_n(y)| >= eps for some
// n, m >= N}. Points of N are decided from their exact tail values. For a
// limit point x with least nonzero digit j, the points of its cell converging
// to x are y = (x_{>j}, x_j - 1, t, z) with t -> infinity; membership of x in
// every acc(E_N) is decided by a witness search at two large scales.

namespace {

struct GeLeaf {
  unsigned digit;
  std::uint64_t a, b;
};

void collect_ge(const Formula& f, std::vector<GeLeaf>& out) {
  const auto& nd = f.node();
  if (nd.op == Formula::Op::DigitGeN) out.push_back({nd.digit, nd.a, nd.b});
  for (const auto& k : nd.kids) collect_ge(k, out);
}

struct WitnessSearch {
  const SeqFamily& fam;
  Rational eps;
  const std::vector<DigitShape>& shape;
  std::vector<GeLeaf> leaves;

  // Candidate values for variable digit i given the thresholds at n and m.
  std::vector<std::uint64_t> candidates(unsigned i, bool large_only, std::uint64_t n, std::uint64_t m,
                                        std::uint64_t floor) const {
    const std::uint64_t T = shape[i].threshold, M = shape[i].modulus;
    std::set<std::uint64_t> cuts{T};
    for (const auto& l : leaves) {
      if (l.digit != i) continue;
      cuts.insert(l.a * n + l.b);
      cuts.insert(l.a * m + l.b);
    }
    std::set<std::uint64_t> out;
    if (!large_only) {
      for (std::uint64_t v = 0; v < T; ++v) out.insert(v);
    }
    std::vector<std::uint64_t> c(cuts.begin(), cuts.end());
    for (std::size_t g = 0; g < c.size(); ++g) {
      const std::uint64_t lo = std::max(c[g], T);
      const bool open_top = g + 1 == c.size();
      const std::uint64_t hi = open_top ? ~std::uint64_t{0} : c[g + 1];
      if (lo >= hi) continue;
      std::vector<std::uint64_t> bases{lo};
      if (open_top) bases.push_back(std::max(lo, floor));
      else if (hi - lo > 2 * M) bases.push_back(lo + (hi - lo) / 2);
      for (auto base : bases) {
        for (std::uint64_t r = 0; r < M; ++r) {
          const std::uint64_t v = base + (r + M - base % M) % M;
          if (v < hi && (!large_only || v >= floor)) out.insert(v);
        }
      }
    }
    return {out.begin(), out.end()};
  }

  bool witness(const GridSet& g, std::vector<std::uint64_t>& y, unsigned j, std::uint64_t n, std::uint64_t m,
               std::uint64_t floor) const {
    // Digits j-1 (t, must be large) down to 0 (z) are free.
    std::vector<std::vector<std::uint64_t>> cand(j);
    for (unsigned i = 0; i < j; ++i) cand[i] = candidates(i, i + 1 == j, n, m, floor);
    for (const auto& c : cand) {
      if (c.empty()) return false;
    }
    std::vector<std::size_t> idx(j, 0);
    while (true) {
      for (unsigned i = 0; i < j; ++i) y[i] = cand[i][idx[i]];
      if (g.contains(y) && abs(fam.eval(y, n) - fam.eval(y, m)) >= eps) return true;
      unsigned i = 0;
      while (i < j && ++idx[i] == cand[i].size()) idx[i++] = 0;
      if (i == j) return false;
    }
  }

  bool search(const GridSet& g, std::vector<std::uint64_t> y, unsigned j, std::uint64_t L) const {
    const std::uint64_t P = fam.period();
    std::uint64_t amax = 1;
    for (const auto& l : leaves) amax = std::max(amax, l.a);
    const std::uint64_t H = 2 * amax + 2;
    for (std::uint64_t r = 0; r < P; ++r) {
      const std::uint64_t n = L + r;
      std::set<std::uint64_t> ms;
      for (std::uint64_t d = 1; d <= 2 * P; ++d) ms.insert(n + d);
      for (std::uint64_t s = 0; s < P; ++s) ms.insert(H * n + s);
      for (const auto& p : leaves) {
        for (const auto& q : leaves) {
          if (p.digit != q.digit || p.a * n + p.b <= q.b) continue;
          const std::uint64_t star = (p.a * n + p.b - q.b + q.a - 1) / q.a;
          for (std::uint64_t d = 0; d <= 2 * P + 2; ++d) {
            const std::uint64_t mm = star + d >= P + 1 ? star + d - (P + 1) : 0;
            if (mm > n) ms.insert(mm);
          }
        }
      }
      for (auto m : ms) {
        if (witness(g, y, j, n, m, L / 4)) return true;
      }
    }
    return false;
  }
};

}  // namespace

PatternSet DerivativeOp::apply_convergence(const ConvDeriv& c, const PatternSet& f) const {
  const SpaceDesc& sp = t_.space();
  const unsigned dims = sp.dims();
  std::vector<DigitShape> shape = GridSet::join(f.grid().shape(), c.fam.shape());
  for (const auto& cell : t_.cells()) shape = GridSet::join(shape, cell.grid().shape());
  for (auto& s : shape) s.threshold += 1;

  WitnessSearch ws{c.fam, c.eps, shape, {}};
  for (const auto& p : c.fam.pieces()) collect_ge(p.cell, ws.leaves);
  const GridSet probe(shape);
  const std::uint64_t L = c.fam.period() * 4096;

  std::map<std::vector<std::uint64_t>, bool> memo;
  auto member = [&](const std::vector<std::uint64_t>& d) {
    if (!f.contains_digits(d)) return false;
    const auto tail = c.fam.tail_values(d, c.fam.settle_index(d));
    if (tail.back() - tail.front() >= c.eps) return true;
    unsigned j = 0;
    while (j < dims && d[j] == 0) ++j;
    if (j == 0 || j == dims) return false;
    const auto& cells = t_.cells();
    std::size_t ci = 0;
    while (ci < cells.size() && !cells[ci].contains_digits(d)) ++ci;
    std::vector<std::uint64_t> y(d);
    y[j] -= 1;
    std::fill(y.begin(), y.begin() + j, 0);
    std::vector<std::uint64_t> key{j, ci};
    for (unsigned i = j; i < dims; ++i) key.push_back(probe.class_of(i, y[i]));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const GridSet g = f.grid().intersect(cells.at(ci).grid());
    const bool small = ws.search(g, y, j, L), large = ws.search(g, y, j, 2 * L);
    if (small != large) {
      throw Error(ErrorKind::Undecidable, "convergence derivative at " + point_of(d).str() + " depends on the scale");
    }
    memo.emplace(std::move(key), small);
    return small;
  };

  GridSet out(shape);
  for (std::size_t cell = 0; cell < out.cell_count(); ++cell) {
    const bool a = member(out.cell_point(cell, 0));
    if (a != member(out.cell_point(cell, 1))) {
      throw Error(ErrorKind::Undecidable, "convergence derivative is not uniform on a grid cell");
    }
    out.set(cell, a);
  }
  return PatternSet::from_grid(sp, out);
}

// ---------------------------------------------------------------- iteration

Budget Budget::from_env() {
  Budget b;
  const char* env = std::getenv("TRANSFINITE_BUDGET");
  if (!env || !*env) return b;
  const std::string_view s(env);
  auto num = [&](std::string_view part, std::size_t& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || p != part.data() + part.size()) {
      throw Error(ErrorKind::Parse, "TRANSFINITE_BUDGET must be 'steps' or 'steps:limits', got '" + std::string(s) + "'");
    }
  };
  const auto colon = s.find(':');
  num(s.substr(0, colon), b.successor_steps);
  if (colon != std::string_view::npos) num(s.substr(colon + 1), b.limit_jumps);
  return b;
}

const PatternSet& IterationTrace::at(const Ordinal& theta) const {
  if (theta.is_finite() && theta.digit(0) < stages.size()) return stages[theta.digit(0)].set;
  return stages.back().set;
}

std::string IterationTrace::log() const {
  std::ostringstream os;
  for (const auto& s : stages) os << "stage " << s.index.str() << " set " << s.set.str() << "\n";
  os << "rank " << rank.str() << (fixpoint ? " fixpoint" : "") << "\n";
  return os.str();
}

IterationTrace iterate(const DerivativeOp& d, const PatternSet& f0, const Budget& budget) {
  IterationTrace tr;
  tr.stages.push_back({Ordinal{}, f0});
  if (f0.is_empty()) {
    tr.rank.value = Ordinal{};
    return tr;
  }
  PatternSet cur = f0;
  for (std::uint64_t k = 1;; ++k) {
    if (tr.budget_used >= budget.successor_steps) {
      throw Error(ErrorKind::BudgetExceeded, "no stabilization after " + std::to_string(tr.budget_used) + " steps");
    }
    PatternSet next = d.apply(cur);
    ++tr.budget_used;
    if (!next.subset_of(cur)) throw Error(ErrorKind::VerificationError, "derivative grew at stage " + std::to_string(k));
    if (next == cur) {
      tr.fixpoint = true;
      return tr;
    }
    tr.stages.push_back({Ordinal::finite(k), next});
    if (next.is_empty()) {
      tr.rank.value = Ordinal::finite(k);
      return tr;
    }
    cur = std::move(next);
  }
}

RankValue rank(const DerivativeOp& d, const Budget& budget) { return iterate(d, d.topology().whole(), budget).rank; }

}  // namespace transfinite
