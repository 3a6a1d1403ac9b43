#include "transfinite/sexpr.hpp"

#include <cctype>
#include <charconv>

#include "transfinite/error.hpp"

namespace transfinite {

const std::string& SExpr::scalar() const {
  if (kind == Kind::List) throw Error(ErrorKind::Parse, "expected an atom at " + where());
  return text;
}

std::string_view SExpr::head() const {
  if (kind != Kind::List || items.empty() || !items.front().is_atom()) return {};
  return items.front().text;
}

std::string SExpr::where() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::uint64_t SExpr::as_natural() const {
  const std::string& s = scalar();
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, "expected a natural number, got '" + s + "' at " + where());
  }
  return v;
}

std::int64_t SExpr::as_integer() const {
  const std::string& s = scalar();
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, "expected an integer, got '" + s + "' at " + where());
  }
  return v;
}

SExpr SExpr::atom(std::string text) {
  SExpr e;
  e.kind = Kind::Atom;
  e.text = std::move(text);
  return e;
}

SExpr SExpr::string(std::string text) {
  SExpr e;
  e.kind = Kind::String;
  e.text = std::move(text);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.items = std::move(items);
  return e;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    while (true) {
      skip();
      if (pos_ >= text_.size()) break;
      out.push_back(form());
    }
    return out;
  }

 private:
  SExpr form() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const int line = line_, col = col_;
    SExpr e;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated list opened at line " + std::to_string(line));
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.items.push_back(form());
      }
    } else if (c == ')') {
      fail("unexpected ')'");
    } else if (c == '"') {
      advance();
      e.kind = SExpr::Kind::String;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated string");
        char d = text_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\' && pos_ < text_.size()) {
          d = text_[pos_];
          advance();
        }
        e.text.push_back(d);
      }
    } else {
      e.kind = SExpr::Kind::Atom;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == ';') break;
        e.text.push_back(d);
        advance();
      }
    }
    e.line = line;
    e.column = col;
    return e;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, what + " at line " + std::to_string(line_) + ", column " + std::to_string(col_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == ';') return true;
  }
  return false;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

SExpr parse_sexpr(std::string_view text) {
  auto forms = parse_sexprs(text);
  if (forms.size() != 1) {
    throw Error(ErrorKind::Parse, "expected exactly one form, found " + std::to_string(forms.size()));
  }
  return std::move(forms.front());
}

std::string to_string(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::Atom:
      return needs_quotes(e.text) ? quote(e.text) : e.text;
    case SExpr::Kind::String:
      return quote(e.text);
    case SExpr::Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) out += ' ';
        out += to_string(e.items[i]);
      }
      return out + ")";
    }
  }
  return {};
}

std::string pretty(const SExpr& e, std::size_t width, int indent) {
  std::string flat = to_string(e);
  if (!e.is_list() || flat.size() + static_cast<std::size_t>(indent) <= width || e.items.size() < 2) return flat;
  std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  std::string out = "(" + to_string(e.items.front());
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    out += "\n" + pad + pretty(e.items[i], width, indent + 2);
  }
  return out + ")";
}

}  // namespace transfinite
