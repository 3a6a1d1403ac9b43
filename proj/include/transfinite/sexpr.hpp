#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

/// Minimal s-expression tree used by the fixture and set syntax.
struct SExpr {
  enum class Kind { Atom, String, List };

  Kind kind = Kind::List;
  std::string text;  // atom or string payload
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  /// Atom or string payload; throws Parse on a list.
  const std::string& scalar() const;
  /// Head symbol of a non-empty list whose first item is an atom, else "".
  std::string_view head() const;
  std::string where() const;

  std::uint64_t as_natural() const;
  std::int64_t as_integer() const;

  static SExpr atom(std::string text);
  static SExpr string(std::string text);
  static SExpr list(std::vector<SExpr> items);
};

/// Parses every top-level form in `text`.
std::vector<SExpr> parse_sexprs(std::string_view text);
/// Parses exactly one form.
SExpr parse_sexpr(std::string_view text);

/// Single-line rendering.
std::string to_string(const SExpr& e);
/// Multi-line rendering: lists whose flat form exceeds `width` break one item per line.
std::string pretty(const SExpr& e, std::size_t width = 88, int indent = 0);

}  // namespace transfinite
