#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transfinite/error.hpp"

namespace transfinite {

/// Exponents of ω must stay below this unless a caller passes its own ceiling.
inline constexpr unsigned kDefaultDepthCeiling = 6;
inline constexpr unsigned kMaxDepthCeiling = 32;

enum class Parity { Even, Odd };
enum class OrdinalKind { Zero, Successor, Limit };

/// An ordinal below ω^N in Cantor normal form:
///   ω^e1·c1 + ω^e2·c2 + ... + ω^ek·ck,  e1 > e2 > ... > ek,  ci ≥ 1.
/// The empty term list is 0. Values are immutable and canonical, so equality
/// is structural.
class Ordinal {
 public:
  struct Term {
    unsigned exponent;
    std::uint64_t coefficient;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Ordinal() = default;

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega_power(unsigned exponent, std::uint64_t coefficient = 1);
  static Ordinal omega() { return omega_power(1); }
  /// Validates the CNF invariants; throws InvalidArgument / DepthExceeded.
  static Ordinal from_terms(std::vector<Term> terms, unsigned ceiling = kDefaultDepthCeiling);
  /// `digits[i]` is the coefficient of ω^i.
  static Ordinal from_digits(std::span<const std::uint64_t> digits);
  static Ordinal parse(std::string_view text, unsigned ceiling = kDefaultDepthCeiling);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  /// Coefficient of ω^i (0 when absent).
  std::uint64_t digit(unsigned i) const noexcept;
  /// One past the leading exponent; 0 for the ordinal 0.
  unsigned width() const noexcept;
  std::vector<std::uint64_t> digits(unsigned count) const;

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_finite() const noexcept { return terms_.empty() || terms_.front().exponent == 0; }
  std::uint64_t finite_part() const noexcept { return digit(0); }

  std::string str() const;

  friend bool operator==(const Ordinal&, const Ordinal&) = default;
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Term> terms_;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

Ordinal add(const Ordinal& a, const Ordinal& b, unsigned ceiling = kDefaultDepthCeiling);
Ordinal mul(const Ordinal& a, const Ordinal& b, unsigned ceiling = kDefaultDepthCeiling);
/// The unique t with a + t = b; requires a <= b.
Ordinal left_subtract(const Ordinal& b, const Ordinal& a);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

Parity parity(const Ordinal& a);
inline bool is_even(const Ordinal& a) { return parity(a) == Parity::Even; }
OrdinalKind classify(const Ordinal& a);
inline bool is_limit(const Ordinal& a) { return classify(a) == OrdinalKind::Limit; }

/// a with its finite part removed (0 or a limit).
Ordinal limit_part(const Ordinal& a);
/// Predecessor of a successor ordinal.
Ordinal predecessor(const Ordinal& a);
/// Last CNF exponent of a nonzero ordinal.
unsigned trailing_exponent(const Ordinal& a);

/// n-th element of the canonical fundamental sequence of a limit ordinal:
/// the last term ω^e·c becomes ω^e·(c-1) + ω^(e-1)·n. With `even_only`, the
/// finite case (e = 1) uses 2n so every element is even and the sequence stays
/// strictly increasing.
Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n, bool even_only = false);

std::string_view to_string(Parity p);
std::string_view to_string(OrdinalKind k);

}  // namespace transfinite
