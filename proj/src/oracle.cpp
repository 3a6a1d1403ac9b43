#include "transfinite/oracle.hpp"

#include <algorithm>

namespace transfinite {

OracleSet::OracleSet(const SpaceDesc& space) : space_(space) {
  if (!supports(space)) throw Error(ErrorKind::NotOracleSpace, space.str() + " is not below w^2");
  blocks_ = space.bound.digit(1);
  full_.assign(blocks_, std::vector<std::uint8_t>(kPrefix + kPeriod, 0));
  trail_.assign(space.bound.digit(0), 0);
}

OracleSet OracleSet::from_formula(const SpaceDesc& space, const Formula& f) {
  std::vector<DigitShape> shape(2);
  accumulate_shape(f, shape);
  if (shape[0].threshold > kPrefix || kPeriod % shape[0].modulus != 0) {
    throw Error(ErrorKind::NotOracleSpace, "digit-0 pattern of " + f.str() + " exceeds the oracle window");
  }
  OracleSet o(space);
  o.for_each_position([&](std::uint64_t b, std::uint64_t d) {
    const std::uint64_t digits[2] = {d, b};
    o.set(b, d, f.eval(digits));
  });
  return o;
}

OracleSet OracleSet::from_pattern(const PatternSet& s) {
  const auto& sh = s.grid().shape();
  if (sh[0].threshold > kPrefix || kPeriod % sh[0].modulus != 0) {
    throw Error(ErrorKind::NotOracleSpace, "digit-0 grid of " + s.str() + " exceeds the oracle window");
  }
  OracleSet o(s.space());
  o.for_each_position([&](std::uint64_t b, std::uint64_t d) {
    std::vector<std::uint64_t> digits{d};
    if (s.space().dims() > 1) digits.push_back(b);
    o.set(b, d, s.contains_digits(digits));
  });
  return o;
}

PatternSet OracleSet::to_pattern() const {
  std::vector<Formula> alts;
  auto block_formula = [&](std::uint64_t b, std::vector<Formula> inner) {
    Formula in = Formula::disj(std::move(inner));
    if (space_.dims() == 1) return in;
    return Formula::conj({Formula::digit_eq(1, b), std::move(in)});
  };
  for (std::uint64_t b = 0; b < blocks_; ++b) {
    std::vector<Formula> inner;
    for (std::uint64_t d = 0; d < kPrefix; ++d) {
      if (full_[b][d]) inner.push_back(Formula::digit_eq(0, d));
    }
    for (std::uint64_t r = 0; r < kPeriod; ++r) {
      if (full_[b][kPrefix + r]) {
        inner.push_back(Formula::conj({Formula::digit_ge(0, kPrefix), Formula::digit_mod(0, kPeriod, (kPrefix + r) % kPeriod)}));
      }
    }
    alts.push_back(block_formula(b, std::move(inner)));
  }
  std::vector<Formula> inner;
  for (std::uint64_t d = 0; d < trail_.size(); ++d) {
    if (trail_[d]) inner.push_back(Formula::digit_eq(0, d));
  }
  alts.push_back(block_formula(blocks_, std::move(inner)));
  return PatternSet::from_formula(space_, Formula::disj(std::move(alts)));
}

bool OracleSet::contains(std::uint64_t block, std::uint64_t d) const {
  if (block < blocks_) {
    const auto& bits = full_[block];
    return d < kPrefix ? bits[d] != 0 : bits[kPrefix + (d - kPrefix) % kPeriod] != 0;
  }
  if (block == blocks_ && d < trail_.size()) return trail_[d] != 0;
  return false;
}

bool OracleSet::contains(const Ordinal& x) const {
  if (x.width() > 2) return false;
  return contains(x.digit(1), x.digit(0));
}

void OracleSet::set(std::uint64_t block, std::uint64_t d, bool v) {
  if (block < blocks_) {
    if (d >= kPrefix + kPeriod) throw Error(ErrorKind::InvalidArgument, "oracle position out of window");
    full_[block][d] = v ? 1 : 0;
  } else if (block == blocks_ && d < trail_.size()) {
    trail_[d] = v ? 1 : 0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "oracle position outside the space");
  }
}

bool OracleSet::unbounded_in(std::uint64_t block) const {
  const auto& bits = full_.at(block);
  return std::any_of(bits.begin() + kPrefix, bits.end(), [](std::uint8_t b) { return b != 0; });
}

bool OracleSet::empty() const {
  for (const auto& b : full_) {
    if (std::any_of(b.begin(), b.end(), [](std::uint8_t v) { return v != 0; })) return false;
  }
  return std::none_of(trail_.begin(), trail_.end(), [](std::uint8_t v) { return v != 0; });
}

OracleSet OracleSet::unite(const OracleSet& o) const {
  OracleSet out = *this;
  out.for_each_position([&](std::uint64_t b, std::uint64_t d) { out.set(b, d, contains(b, d) || o.contains(b, d)); });
  return out;
}

OracleSet OracleSet::intersect(const OracleSet& o) const {
  OracleSet out = *this;
  out.for_each_position([&](std::uint64_t b, std::uint64_t d) { out.set(b, d, contains(b, d) && o.contains(b, d)); });
  return out;
}

OracleSet OracleSet::complement() const {
  OracleSet out = *this;
  out.for_each_position([&](std::uint64_t b, std::uint64_t d) { out.set(b, d, !contains(b, d)); });
  return out;
}

OracleSet OracleSet::accumulation() const {
  // The only limit points below w^2 are w*b for b >= 1; w*b is a limit of S
  // exactly when block b-1 meets S in infinitely many points.
  OracleSet out(space_);
  for (std::uint64_t b = 1; b <= blocks_; ++b) {
    if (b == blocks_ && trail_.empty()) break;
    if (unbounded_in(b - 1)) out.set(b, 0, true);
  }
  return out;
}

OracleSet OracleSet::accumulation(const std::vector<OracleSet>& cells) const {
  OracleSet out(space_);
  for (const auto& c : cells) out = out.unite(intersect(c).accumulation().intersect(c));
  return out;
}

}  // namespace transfinite
