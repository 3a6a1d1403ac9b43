#include "transfinite/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace transfinite {

namespace {

void check_ceiling(unsigned exponent, unsigned ceiling) {
  if (exponent >= ceiling) {
    throw Error(ErrorKind::DepthExceeded,
                "exponent " + std::to_string(exponent) + " needs depth ceiling above " +
                    std::to_string(ceiling));
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw Error(ErrorKind::InvalidArgument, "ordinal coefficient overflow");
  }
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
    throw Error(ErrorKind::InvalidArgument, "ordinal coefficient overflow");
  }
  return a * b;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal o;
  if (n != 0) o.terms_.push_back({0, n});
  return o;
}

Ordinal Ordinal::omega_power(unsigned exponent, std::uint64_t coefficient) {
  check_ceiling(exponent, kMaxDepthCeiling);
  Ordinal o;
  if (coefficient != 0) o.terms_.push_back({exponent, coefficient});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms, unsigned ceiling) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) {
      throw Error(ErrorKind::InvalidArgument, "CNF coefficient must be positive");
    }
    if (i > 0 && terms[i].exponent >= terms[i - 1].exponent) {
      throw Error(ErrorKind::InvalidArgument, "CNF exponents must strictly decrease");
    }
    check_ceiling(terms[i].exponent, ceiling);
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Ordinal Ordinal::from_digits(std::span<const std::uint64_t> digits) {
  check_ceiling(static_cast<unsigned>(digits.size() == 0 ? 0 : digits.size() - 1), kMaxDepthCeiling);
  Ordinal o;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] != 0) o.terms_.push_back({static_cast<unsigned>(i), digits[i]});
  }
  return o;
}

std::uint64_t Ordinal::digit(unsigned i) const noexcept {
  for (const auto& t : terms_) {
    if (t.exponent == i) return t.coefficient;
    if (t.exponent < i) break;
  }
  return 0;
}

unsigned Ordinal::width() const noexcept {
  return terms_.empty() ? 0 : terms_.front().exponent + 1;
}

std::vector<std::uint64_t> Ordinal::digits(unsigned count) const {
  std::vector<std::uint64_t> out(count, 0);
  for (const auto& t : terms_) {
    if (t.exponent < count) out[t.exponent] = t.coefficient;
  }
  return out;
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (t.exponent > 1) out += "^" + std::to_string(t.exponent);
    if (t.coefficient > 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

namespace {

class OrdinalParser {
 public:
  OrdinalParser(std::string_view text, unsigned ceiling) : text_(text), ceiling_(ceiling) {}

  Ordinal run() {
    std::vector<Ordinal::Term> terms;
    skip_ws();
    if (at_end()) fail("empty ordinal");
    while (true) {
      terms.push_back(term());
      skip_ws();
      if (at_end()) break;
      expect('+');
    }
    // Accept sums that are not already in normal form by folding with
    // ordinal addition.
    Ordinal acc;
    for (const auto& t : terms) {
      if (t.coefficient == 0) continue;
      acc = add(acc, Ordinal::from_terms({t}, ceiling_), ceiling_);
    }
    return acc;
  }

 private:
  Ordinal::Term term() {
    skip_ws();
    if (consume_omega()) {
      unsigned exponent = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        exponent = static_cast<unsigned>(number());
      }
      check_ceiling(exponent, ceiling_);
      std::uint64_t coef = 1;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        coef = number();
      }
      return {exponent, coef};
    }
    return {0, number()};
  }

  bool consume_omega() {
    if (peek() == 'w') {
      ++pos_;
      return true;
    }
    static constexpr std::string_view kOmega = "\xCF\x89";  // UTF-8 ω
    if (text_.substr(pos_, kOmega.size()) == kOmega) {
      pos_ += kOmega.size();
      return true;
    }
    return false;
  }

  std::uint64_t number() {
    skip_ws();
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("expected a natural number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos_) + " in \"" +
                                      std::string(text_) + "\"");
  }

  std::string_view text_;
  unsigned ceiling_;
  std::size_t pos_ = 0;
};

}  // namespace

Ordinal Ordinal::parse(std::string_view text, unsigned ceiling) {
  return OrdinalParser(text, ceiling).run();
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i].exponent != y[i].exponent) return x[i].exponent <=> y[i].exponent;
    if (x[i].coefficient != y[i].coefficient) return x[i].coefficient <=> y[i].coefficient;
  }
  return x.size() <=> y.size();
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal add(const Ordinal& a, const Ordinal& b, unsigned ceiling) {
  if (b.is_zero()) {
    if (!a.is_zero()) check_ceiling(a.terms().front().exponent, ceiling);
    return a;
  }
  const unsigned lead = b.terms().front().exponent;
  std::vector<Ordinal::Term> out;
  for (const auto& t : a.terms()) {
    if (t.exponent > lead) out.push_back(t);
    else if (t.exponent == lead) {
      out.push_back({lead, checked_add(t.coefficient, b.terms().front().coefficient)});
    }
  }
  const bool merged = !out.empty() && out.back().exponent == lead;
  for (std::size_t i = merged ? 1 : 0; i < b.terms().size(); ++i) out.push_back(b.terms()[i]);
  return Ordinal::from_terms(std::move(out), ceiling);
}

Ordinal mul(const Ordinal& a, const Ordinal& b, unsigned ceiling) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& at = a.terms();
  const unsigned lead = at.front().exponent;
  Ordinal acc;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (t.exponent == 0) {
      // a·c = ω^lead·(lead_coef·c) + rest(a)
      std::vector<Ordinal::Term> terms{{lead, checked_mul(at.front().coefficient, t.coefficient)}};
      for (std::size_t i = 1; i < at.size(); ++i) terms.push_back(at[i]);
      piece = Ordinal::from_terms(std::move(terms), ceiling);
    } else {
      // a·ω^e·c = ω^(lead+e)·c
      check_ceiling(lead + t.exponent, ceiling);
      piece = Ordinal::from_terms({{lead + t.exponent, t.coefficient}}, ceiling);
    }
    acc = add(acc, piece, ceiling);
  }
  return acc;
}

Ordinal left_subtract(const Ordinal& b, const Ordinal& a) {
  if (a > b) {
    throw Error(ErrorKind::InvalidArgument, "left_subtract requires " + a.str() + " <= " + b.str());
  }
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t i = 0;
  while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
  std::vector<Ordinal::Term> out;
  if (i < x.size()) {
    // First difference: b's term is larger, either by exponent or coefficient.
    if (x[i].exponent == y[i].exponent) {
      out.push_back({y[i].exponent, y[i].coefficient - x[i].coefficient});
    } else {
      out.push_back(y[i]);
    }
    ++i;
  }
  for (; i < y.size(); ++i) out.push_back(y[i]);
  return Ordinal::from_terms(std::move(out), kMaxDepthCeiling);
}

Parity parity(const Ordinal& a) {
  return (a.finite_part() % 2 == 0) ? Parity::Even : Parity::Odd;
}

OrdinalKind classify(const Ordinal& a) {
  if (a.is_zero()) return OrdinalKind::Zero;
  return a.terms().back().exponent == 0 ? OrdinalKind::Successor : OrdinalKind::Limit;
}

Ordinal limit_part(const Ordinal& a) {
  auto terms = a.terms();
  if (!terms.empty() && terms.back().exponent == 0) terms.pop_back();
  return Ordinal::from_terms(std::move(terms), kMaxDepthCeiling);
}

Ordinal predecessor(const Ordinal& a) {
  if (classify(a) != OrdinalKind::Successor) {
    throw Error(ErrorKind::InvalidArgument, a.str() + " has no predecessor");
  }
  auto terms = a.terms();
  if (--terms.back().coefficient == 0) terms.pop_back();
  return Ordinal::from_terms(std::move(terms), kMaxDepthCeiling);
}

unsigned trailing_exponent(const Ordinal& a) {
  if (a.is_zero()) throw Error(ErrorKind::InvalidArgument, "0 has no trailing exponent");
  return a.terms().back().exponent;
}

Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n, bool even_only) {
  if (classify(a) != OrdinalKind::Limit) {
    throw Error(ErrorKind::NotLimit, a.str() + " is not a limit ordinal");
  }
  auto terms = a.terms();
  const Ordinal::Term last = terms.back();
  terms.pop_back();
  if (last.coefficient > 1) terms.push_back({last.exponent, last.coefficient - 1});
  const Ordinal base = Ordinal::from_terms(std::move(terms), kMaxDepthCeiling);
  const unsigned e = last.exponent - 1;
  const std::uint64_t count = (even_only && e == 0) ? checked_mul(n, 2) : n;
  return add(base, Ordinal::omega_power(e, count), kMaxDepthCeiling);
}

std::string_view to_string(Parity p) { return p == Parity::Even ? "Even" : "Odd"; }

std::string_view to_string(OrdinalKind k) {
  switch (k) {
    case OrdinalKind::Zero: return "Zero";
    case OrdinalKind::Successor: return "Successor";
    case OrdinalKind::Limit: return "Limit";
  }
  return "?";
}

}  // namespace transfinite
