#include "transfinite/grid.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

namespace transfinite {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 26;

std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

}  // namespace

GridSet::GridSet(std::vector<DigitShape> shape, bool fill) : shape_(std::move(shape)) {
  init_strides();
  bits_.assign(stride_.empty() ? 1 : stride_.back() * classes(dims() - 1), fill ? 1 : 0);
}

void GridSet::init_strides() {
  stride_.assign(shape_.size(), 1);
  std::size_t s = 1;
  for (unsigned i = 0; i < shape_.size(); ++i) {
    if (shape_[i].modulus == 0) throw Error(ErrorKind::InvalidArgument, "grid modulus must be positive");
    stride_[i] = s;
    s *= classes(i);
    if (s > kMaxCells) throw Error(ErrorKind::Undecidable, "pattern grid too large (" + std::to_string(s) + " cells)");
  }
}

GridSet GridSet::compile(const Formula& f, unsigned dims, std::vector<DigitShape> shape) {
  if (!f.is_closed()) throw Error(ErrorKind::InvalidArgument, "cannot compile a parameterised formula: " + f.str());
  shape.resize(dims);
  accumulate_shape(f, shape);
  GridSet g(std::move(shape));
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (f.eval(g.cell_point(c))) g.set(c);
  }
  return g;
}

std::uint64_t GridSet::class_of(unsigned digit, std::uint64_t value) const {
  const auto& s = shape_[digit];
  return value < s.threshold ? value : s.threshold + value % s.modulus;
}

std::uint64_t GridSet::representative(unsigned digit, std::uint64_t cls, unsigned which) const {
  const auto& s = shape_[digit];
  if (cls < s.threshold) return cls;
  const std::uint64_t r = cls - s.threshold;
  const std::uint64_t first = s.threshold + (r + s.modulus - s.threshold % s.modulus) % s.modulus;
  return first + static_cast<std::uint64_t>(which) * s.modulus;
}

std::size_t GridSet::cell_of(std::span<const std::uint64_t> digits) const {
  std::size_t idx = 0;
  for (unsigned i = 0; i < dims(); ++i) {
    idx += stride_[i] * class_of(i, i < digits.size() ? digits[i] : 0);
  }
  return idx;
}

void GridSet::cell_classes(std::size_t cell, std::vector<std::uint64_t>& out) const {
  out.resize(dims());
  for (unsigned i = 0; i < dims(); ++i) {
    out[i] = (cell / stride_[i]) % classes(i);
  }
}

std::vector<std::uint64_t> GridSet::cell_point(std::size_t cell, unsigned which) const {
  std::vector<std::uint64_t> p(dims());
  for (unsigned i = 0; i < dims(); ++i) p[i] = representative(i, (cell / stride_[i]) % classes(i), which);
  return p;
}

bool GridSet::empty() const {
  return std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

bool GridSet::full() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

std::size_t GridSet::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GridSet GridSet::regrid(const std::vector<DigitShape>& target) const {
  if (target == shape_) return *this;
  GridSet out(target);
  const unsigned d = dims();
  // map[i][k]: old class of the representative of new class k along digit i.
  std::vector<std::vector<std::size_t>> map(d);
  for (unsigned i = 0; i < d; ++i) {
    map[i].resize(out.classes(i));
    for (std::size_t k = 0; k < map[i].size(); ++k) {
      map[i][k] = class_of(i, out.representative(i, k)) * stride_[i];
    }
  }
  if (d == 0) {
    out.bits_[0] = bits_[0];
    return out;
  }
  std::vector<std::size_t> k(d, 0);
  std::size_t old = 0;
  for (unsigned i = 0; i < d; ++i) old += map[i][0];
  for (std::size_t c = 0; c < out.bits_.size(); ++c) {
    out.bits_[c] = bits_[old];
    for (unsigned i = 0; i < d; ++i) {
      old -= map[i][k[i]];
      if (++k[i] < map[i].size()) {
        old += map[i][k[i]];
        break;
      }
      k[i] = 0;
      old += map[i][0];
    }
  }
  return out;
}

GridSet GridSet::minimized() const {
  GridSet cur = *this;
  for (unsigned i = 0; i < dims(); ++i) {
    // Moduli first: a smaller modulus can let the threshold drop further.
    bool changed = true;
    while (changed) {
      changed = false;
      const auto& s = cur.shape_[i];
      for (std::uint64_t p : prime_factors(s.modulus)) {
        const std::uint64_t m2 = s.modulus / p;
        bool ok = true;
        const std::size_t st = cur.stride_[i];
        const std::size_t cls = cur.classes(i);
        for (std::size_t c = 0; c < cur.bits_.size() && ok; ++c) {
          const std::size_t k = (c / st) % cls;
          if (k < s.threshold) continue;
          const std::size_t r = k - s.threshold;
          const std::size_t k2 = s.threshold + r % m2;
          if (k2 != k && cur.bits_[c] != cur.bits_[c - (k - k2) * st]) ok = false;
        }
        if (ok) {
          auto shape = cur.shape_;
          shape[i].modulus = m2;
          cur = cur.regrid(shape);
          changed = true;
          break;
        }
      }
    }
    while (cur.shape_[i].threshold > 0) {
      const auto& s = cur.shape_[i];
      const std::uint64_t v = s.threshold - 1;
      const std::size_t kres = s.threshold + v % s.modulus;
      const std::size_t st = cur.stride_[i];
      const std::size_t cls = cur.classes(i);
      bool ok = true;
      for (std::size_t c = 0; c < cur.bits_.size() && ok; ++c) {
        if ((c / st) % cls != v) continue;
        if (cur.bits_[c] != cur.bits_[c + (kres - v) * st]) ok = false;
      }
      if (!ok) break;
      auto shape = cur.shape_;
      shape[i].threshold = v;
      cur = cur.regrid(shape);
    }
  }
  return cur;
}

std::vector<DigitShape> GridSet::join(const std::vector<DigitShape>& a, const std::vector<DigitShape>& b) {
  std::vector<DigitShape> out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    DigitShape x = i < a.size() ? a[i] : DigitShape{0, 1};
    DigitShape y = i < b.size() ? b[i] : DigitShape{0, 1};
    out[i] = {std::max(x.threshold, y.threshold), std::lcm(x.modulus, y.modulus)};
  }
  return out;
}

namespace {

template <class Op>
GridSet combine(const GridSet& a, const GridSet& b, Op op) {
  if (a.dims() != b.dims()) throw Error(ErrorKind::InvalidArgument, "grid dimension mismatch");
  auto shape = GridSet::join(a.shape(), b.shape());
  GridSet x = a.regrid(shape);
  GridSet y = b.regrid(shape);
  GridSet out(shape);
  for (std::size_t c = 0; c < out.cell_count(); ++c) out.set(c, op(x.test(c), y.test(c)));
  return out.minimized();
}

}  // namespace

GridSet GridSet::unite(const GridSet& o) const {
  return combine(*this, o, [](bool p, bool q) { return p || q; });
}
GridSet GridSet::intersect(const GridSet& o) const {
  return combine(*this, o, [](bool p, bool q) { return p && q; });
}
GridSet GridSet::minus(const GridSet& o) const {
  return combine(*this, o, [](bool p, bool q) { return p && !q; });
}
GridSet GridSet::complement() const {
  GridSet out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

bool operator==(const GridSet& a, const GridSet& b) { return a.shape_ == b.shape_ && a.bits_ == b.bits_; }

Formula GridSet::decompile() const {
  if (empty()) return Formula::falsity();
  if (full()) return Formula::truth();
  return decompile_slice(static_cast<int>(dims()) - 1, 0);
}

Formula GridSet::decompile_slice(int digit, std::size_t base) const {
  if (digit < 0) return bits_[base] ? Formula::truth() : Formula::falsity();
  const unsigned i = static_cast<unsigned>(digit);
  const std::size_t st = stride_[i];
  const std::size_t ncls = classes(i);
  const std::uint8_t* p = bits_.data() + base;
  const std::size_t span = st * ncls;
  if (std::all_of(p, p + span, [](std::uint8_t b) { return b == 0; })) return Formula::falsity();
  if (std::all_of(p, p + span, [](std::uint8_t b) { return b != 0; })) return Formula::truth();

  // Group the classes of this digit by identical lower slices.
  std::vector<int> group(ncls, -1);
  std::vector<std::size_t> leaders;
  for (std::size_t k = 0; k < ncls; ++k) {
    for (std::size_t g = 0; g < leaders.size(); ++g) {
      if (std::memcmp(p + k * st, p + leaders[g] * st, st) == 0) {
        group[k] = static_cast<int>(g);
        break;
      }
    }
    if (group[k] < 0) {
      group[k] = static_cast<int>(leaders.size());
      leaders.push_back(k);
    }
  }

  const auto& s = shape_[i];
  std::vector<Formula> alts;
  for (std::size_t g = 0; g < leaders.size(); ++g) {
    Formula sub = decompile_slice(digit - 1, base + leaders[g] * st);
    if (sub.op() == Formula::Op::False) continue;
    std::vector<bool> in(ncls);
    for (std::size_t k = 0; k < ncls; ++k) in[k] = group[k] == static_cast<int>(g);
    // Extend the residue pattern downwards as far as the singletons follow it.
    std::uint64_t a = s.threshold;
    while (a > 0 && in[a - 1] == in[s.threshold + (a - 1) % s.modulus]) --a;
    std::vector<Formula> cond;
    for (std::uint64_t v = 0; v < a; ++v) {
      if (in[v]) cond.push_back(Formula::digit_eq(i, v));
    }
    std::vector<Formula> residues;
    std::size_t nres = 0;
    for (std::uint64_t r = 0; r < s.modulus; ++r) {
      if (in[s.threshold + r]) {
        ++nres;
        residues.push_back(Formula::digit_mod(i, s.modulus, r));
      }
    }
    if (nres == s.modulus) {
      cond.push_back(Formula::digit_ge(i, a));
    } else if (nres > 0) {
      cond.push_back(Formula::conj({Formula::digit_ge(i, a), Formula::disj(std::move(residues))}));
    }
    alts.push_back(Formula::conj({Formula::disj(std::move(cond)), std::move(sub)}));
  }
  return Formula::disj(std::move(alts));
}

}  // namespace transfinite
