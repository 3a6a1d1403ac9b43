#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "transfinite/formula.hpp"

namespace transfinite {

/// A subset of N^dims given as a union of grid cells. Along digit i the values
/// 0..T_i-1 are singleton classes and values >= T_i fall into M_i residue
/// classes (v mod M_i). Every closed Formula compiles to such a set, and
/// minimized() is canonical, so equality of minimized sets is set equality.
class GridSet {
 public:
  GridSet() = default;
  explicit GridSet(std::vector<DigitShape> shape, bool fill = false);

  /// Compiles a closed formula; `shape` may pre-widen the grid.
  static GridSet compile(const Formula& f, unsigned dims, std::vector<DigitShape> shape = {});
  /// Compiles an arbitrary point predicate, trusting that it is constant on
  /// the cells of `shape`.
  template <class Pred>
  static GridSet tabulate(std::vector<DigitShape> shape, Pred&& member);

  unsigned dims() const { return static_cast<unsigned>(shape_.size()); }
  const std::vector<DigitShape>& shape() const { return shape_; }
  std::size_t cell_count() const { return bits_.size(); }
  std::size_t classes(unsigned digit) const { return shape_[digit].threshold + shape_[digit].modulus; }
  std::size_t stride(unsigned digit) const { return stride_[digit]; }

  std::uint64_t class_of(unsigned digit, std::uint64_t value) const;
  std::uint64_t representative(unsigned digit, std::uint64_t cls, unsigned which = 0) const;
  bool is_residue_class(unsigned digit, std::uint64_t cls) const { return cls >= shape_[digit].threshold; }

  bool test(std::size_t cell) const { return bits_[cell] != 0; }
  void set(std::size_t cell, bool v = true) { bits_[cell] = v ? 1 : 0; }
  std::size_t cell_of(std::span<const std::uint64_t> digits) const;
  bool contains(std::span<const std::uint64_t> digits) const { return test(cell_of(digits)); }
  void cell_classes(std::size_t cell, std::vector<std::uint64_t>& out) const;
  /// A point of the cell; `which` picks the n-th value of each residue class.
  std::vector<std::uint64_t> cell_point(std::size_t cell, unsigned which = 0) const;

  bool empty() const;
  bool full() const;
  std::size_t popcount() const;

  /// Same set on a finer grid (thresholds >= and moduli multiples of ours).
  GridSet regrid(const std::vector<DigitShape>& target) const;
  GridSet minimized() const;

  GridSet unite(const GridSet& o) const;
  GridSet intersect(const GridSet& o) const;
  GridSet minus(const GridSet& o) const;
  /// Complement in N^dims.
  GridSet complement() const;

  /// A compact formula denoting exactly this set.
  Formula decompile() const;

  /// Structural equality; meaningful as set equality on minimized operands.
  friend bool operator==(const GridSet& a, const GridSet& b);

  static std::vector<DigitShape> join(const std::vector<DigitShape>& a, const std::vector<DigitShape>& b);

 private:
  void init_strides();
  Formula decompile_slice(int digit, std::size_t base) const;

  std::vector<DigitShape> shape_;
  std::vector<std::size_t> stride_;
  std::vector<std::uint8_t> bits_;
};

template <class Pred>
GridSet GridSet::tabulate(std::vector<DigitShape> shape, Pred&& member) {
  GridSet g(std::move(shape));
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (member(g.cell_point(c))) g.set(c);
  }
  return g;
}

}  // namespace transfinite
