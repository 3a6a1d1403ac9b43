#include "transfinite/formula.hpp"

#include <algorithm>
#include <numeric>

namespace transfinite {

namespace {

// Three-way comparison of a digit vector against an ordinal.
int compare_digits(std::span<const std::uint64_t> digits, const Ordinal& b) {
  if (b.width() > digits.size()) {
    for (unsigned i = static_cast<unsigned>(digits.size()); i < b.width(); ++i) {
      if (b.digit(i) != 0) return -1;
    }
  }
  for (std::size_t i = digits.size(); i-- > 0;) {
    const std::uint64_t bi = b.digit(static_cast<unsigned>(i));
    if (digits[i] != bi) return digits[i] < bi ? -1 : 1;
  }
  return 0;
}

bool is_leaf_n(Formula::Op op) {
  return op == Formula::Op::DigitGeN || op == Formula::Op::ModN || op == Formula::Op::GeN;
}

bool is_leaf_index(Formula::Op op) { return op == Formula::Op::GeParam || op == Formula::Op::LtParam; }

}  // namespace

Formula::Formula() : node_(truth().node_) {}

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::truth() {
  static const Formula t(std::make_shared<const Node>(Node{Op::True}));
  return t;
}

Formula Formula::falsity() {
  static const Formula f(std::make_shared<const Node>(Node{Op::False}));
  return f;
}

Formula Formula::digit_eq(unsigned i, std::uint64_t v) { return make({Op::DigitEq, i, v}); }
Formula Formula::digit_ge(unsigned i, std::uint64_t v) {
  if (v == 0) return truth();
  return make({Op::DigitGe, i, v});
}
Formula Formula::digit_mod(unsigned i, std::uint64_t m, std::uint64_t r) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
  if (m == 1) return truth();
  return make({Op::DigitMod, i, m, r % m});
}
Formula Formula::ord_lt(Ordinal b) { return make({Op::OrdLt, 0, 0, 0, std::move(b)}); }
Formula Formula::ord_ge(Ordinal b) {
  if (b.is_zero()) return truth();
  return make({Op::OrdGe, 0, 0, 0, std::move(b)});
}
Formula Formula::ge_param(Ordinal offset) { return make({Op::GeParam, 0, 0, 0, std::move(offset)}); }
Formula Formula::lt_param(Ordinal offset) { return make({Op::LtParam, 0, 0, 0, std::move(offset)}); }
Formula Formula::digit_ge_n(unsigned i, std::uint64_t a, std::uint64_t b) {
  if (a == 0) return digit_ge(i, b);
  return make({Op::DigitGeN, i, a, b});
}
Formula Formula::mod_n(std::uint64_t m, std::uint64_t r) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
  if (m == 1) return truth();
  return make({Op::ModN, 0, m, r % m});
}
Formula Formula::ge_n(std::uint64_t c) {
  if (c == 0) return truth();
  return make({Op::GeN, 0, c});
}

Formula Formula::conj(std::vector<Formula> kids) {
  std::vector<Formula> flat;
  for (auto& k : kids) {
    if (k.op() == Op::True) continue;
    if (k.op() == Op::False) return falsity();
    if (k.op() == Op::And) {
      for (const auto& g : k.node().kids) flat.push_back(g);
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return make({Op::And, 0, 0, 0, {}, std::move(flat)});
}

Formula Formula::disj(std::vector<Formula> kids) {
  std::vector<Formula> flat;
  for (auto& k : kids) {
    if (k.op() == Op::False) continue;
    if (k.op() == Op::True) return truth();
    if (k.op() == Op::Or) {
      for (const auto& g : k.node().kids) flat.push_back(g);
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return make({Op::Or, 0, 0, 0, {}, std::move(flat)});
}

Formula Formula::negate(Formula f) {
  if (f.op() == Op::True) return falsity();
  if (f.op() == Op::False) return truth();
  if (f.op() == Op::Not) return f.node().kids.front();
  return make({Op::Not, 0, 0, 0, {}, {std::move(f)}});
}

bool Formula::has_index_param() const {
  if (is_leaf_index(op())) return true;
  return std::any_of(node_->kids.begin(), node_->kids.end(), [](const Formula& k) { return k.has_index_param(); });
}

bool Formula::has_n_param() const {
  if (is_leaf_n(op())) return true;
  return std::any_of(node_->kids.begin(), node_->kids.end(), [](const Formula& k) { return k.has_n_param(); });
}

bool Formula::eval(std::span<const std::uint64_t> digits, const std::optional<Ordinal>& shift,
                   const std::optional<std::uint64_t>& n, unsigned ceiling) const {
  const Node& nd = *node_;
  auto dig = [&](unsigned i) -> std::uint64_t { return i < digits.size() ? digits[i] : 0; };
  auto need_n = [&]() -> std::uint64_t {
    if (!n) throw Error(ErrorKind::InvalidArgument, "sequence parameter n is unbound in " + str());
    return *n;
  };
  auto need_shift = [&]() -> const Ordinal& {
    if (!shift) throw Error(ErrorKind::InvalidArgument, "index parameter is unbound in " + str());
    return *shift;
  };
  switch (nd.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::And:
      for (const auto& k : nd.kids) {
        if (!k.eval(digits, shift, n, ceiling)) return false;
      }
      return true;
    case Op::Or:
      for (const auto& k : nd.kids) {
        if (k.eval(digits, shift, n, ceiling)) return true;
      }
      return false;
    case Op::Not: return !nd.kids.front().eval(digits, shift, n, ceiling);
    case Op::DigitEq: return dig(nd.digit) == nd.a;
    case Op::DigitGe: return dig(nd.digit) >= nd.a;
    case Op::DigitMod: return dig(nd.digit) % nd.a == nd.b;
    case Op::OrdLt: return compare_digits(digits, nd.ord) < 0;
    case Op::OrdGe: return compare_digits(digits, nd.ord) >= 0;
    case Op::GeParam: return compare_digits(digits, add(nd.ord, need_shift(), ceiling)) >= 0;
    case Op::LtParam: return compare_digits(digits, add(nd.ord, need_shift(), ceiling)) < 0;
    case Op::DigitGeN: return dig(nd.digit) >= nd.a * need_n() + nd.b;
    case Op::ModN: return need_n() % nd.a == nd.b;
    case Op::GeN: return need_n() >= nd.a;
  }
  return false;
}

bool Formula::eval(const Ordinal& x) const {
  auto d = x.digits(x.width());
  return eval(d);
}

Formula Formula::bind_index(const Ordinal& shift, unsigned ceiling) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::GeParam: return ord_ge(add(nd.ord, shift, ceiling));
    case Op::LtParam: return ord_lt(add(nd.ord, shift, ceiling));
    case Op::And:
    case Op::Or:
    case Op::Not: {
      if (!has_index_param()) return *this;
      std::vector<Formula> kids;
      for (const auto& k : nd.kids) kids.push_back(k.bind_index(shift, ceiling));
      if (nd.op == Op::And) return conj(std::move(kids));
      if (nd.op == Op::Or) return disj(std::move(kids));
      return negate(std::move(kids.front()));
    }
    default: return *this;
  }
}

Formula Formula::bind_n(std::uint64_t n) const {
  const Node& nd = *node_;
  switch (nd.op) {
    case Op::DigitGeN: return digit_ge(nd.digit, nd.a * n + nd.b);
    case Op::ModN: return n % nd.a == nd.b ? truth() : falsity();
    case Op::GeN: return n >= nd.a ? truth() : falsity();
    case Op::And:
    case Op::Or:
    case Op::Not: {
      if (!has_n_param()) return *this;
      std::vector<Formula> kids;
      for (const auto& k : nd.kids) kids.push_back(k.bind_n(n));
      if (nd.op == Op::And) return conj(std::move(kids));
      if (nd.op == Op::Or) return disj(std::move(kids));
      return negate(std::move(kids.front()));
    }
    default: return *this;
  }
}

void Formula::collect_index_offsets(std::vector<Ordinal>& out) const {
  if (is_leaf_index(op())) out.push_back(node_->ord);
  for (const auto& k : node_->kids) k.collect_index_offsets(out);
}

SExpr Formula::to_sexpr() const {
  const Node& nd = *node_;
  auto num = [](std::uint64_t v) { return SExpr::atom(std::to_string(v)); };
  auto sym = [](const char* s) { return SExpr::atom(s); };
  switch (nd.op) {
    case Op::True: return SExpr::list({sym("all")});
    case Op::False: return SExpr::list({sym("none")});
    case Op::And:
    case Op::Or:
    case Op::Not: {
      std::vector<SExpr> items{sym(nd.op == Op::And ? "and" : nd.op == Op::Or ? "or" : "not")};
      for (const auto& k : nd.kids) items.push_back(k.to_sexpr());
      return SExpr::list(std::move(items));
    }
    case Op::DigitEq: return SExpr::list({sym("eq"), num(nd.digit), num(nd.a)});
    case Op::DigitGe: return SExpr::list({sym("ge"), num(nd.digit), num(nd.a)});
    case Op::DigitMod: return SExpr::list({sym("mod"), num(nd.digit), num(nd.a), num(nd.b)});
    case Op::OrdLt: return SExpr::list({sym("lt"), SExpr::string(nd.ord.str())});
    case Op::OrdGe: return SExpr::list({sym("gte"), SExpr::string(nd.ord.str())});
    case Op::GeParam: return SExpr::list({sym("ge-param"), SExpr::string(nd.ord.str())});
    case Op::LtParam: return SExpr::list({sym("lt-param"), SExpr::string(nd.ord.str())});
    case Op::DigitGeN: return SExpr::list({sym("ge-n"), num(nd.digit), num(nd.a), num(nd.b)});
    case Op::ModN: return SExpr::list({sym("mod-n"), num(nd.a), num(nd.b)});
    case Op::GeN: return SExpr::list({sym("n-ge"), num(nd.a)});
  }
  return {};
}

Formula Formula::from_sexpr(const SExpr& e, unsigned ceiling) {
  if (!e.is_list() || e.items.empty() || !e.items.front().is_atom()) {
    throw Error(ErrorKind::Parse, "expected a set form at " + e.where());
  }
  const std::string_view h = e.head();
  const auto& it = e.items;
  auto arity = [&](std::size_t n) {
    if (it.size() != n + 1) {
      throw Error(ErrorKind::Parse, "'" + std::string(h) + "' takes " + std::to_string(n) + " arguments at " + e.where());
    }
  };
  auto digit_at = [&](std::size_t k) {
    std::uint64_t d = it[k].as_natural();
    if (d >= kMaxDepthCeiling) throw Error(ErrorKind::DepthExceeded, "digit index too large at " + it[k].where());
    return static_cast<unsigned>(d);
  };
  auto ord_at = [&](std::size_t k) {
    try {
      return Ordinal::parse(it[k].scalar(), ceiling);
    } catch (const Error& err) {
      throw Error(err.kind(), err.message() + " at " + it[k].where());
    }
  };
  if (h == "all") return arity(0), truth();
  if (h == "none") return arity(0), falsity();
  if (h == "and" || h == "or") {
    std::vector<Formula> kids;
    for (std::size_t k = 1; k < it.size(); ++k) kids.push_back(from_sexpr(it[k], ceiling));
    return h == "and" ? conj(std::move(kids)) : disj(std::move(kids));
  }
  if (h == "not") return arity(1), negate(from_sexpr(it[1], ceiling));
  if (h == "eq") return arity(2), digit_eq(digit_at(1), it[2].as_natural());
  if (h == "ge") return arity(2), digit_ge(digit_at(1), it[2].as_natural());
  if (h == "mod") {
    arity(3);
    std::uint64_t m = it[2].as_natural();
    if (m == 0) throw Error(ErrorKind::Parse, "zero modulus at " + it[2].where());
    return digit_mod(digit_at(1), m, it[3].as_natural());
  }
  if (h == "lt") return arity(1), ord_lt(ord_at(1));
  if (h == "gte") return arity(1), ord_ge(ord_at(1));
  if (h == "ge-param") return arity(1), ge_param(ord_at(1));
  if (h == "lt-param") return arity(1), lt_param(ord_at(1));
  if (h == "ge-n") return arity(3), digit_ge_n(digit_at(1), it[2].as_natural(), it[3].as_natural());
  if (h == "mod-n") {
    arity(2);
    std::uint64_t m = it[1].as_natural();
    if (m == 0) throw Error(ErrorKind::Parse, "zero modulus at " + it[1].where());
    return mod_n(m, it[2].as_natural());
  }
  if (h == "n-ge") return arity(1), ge_n(it[1].as_natural());
  throw Error(ErrorKind::Parse, "unknown set form '" + std::string(h) + "' at " + e.where());
}

Formula Formula::parse(std::string_view text, unsigned ceiling) { return from_sexpr(parse_sexpr(text), ceiling); }

bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.op == b.op && a.digit == b.digit && a.a == b.a && a.b == b.b && a.ord == b.ord && a.kids == b.kids;
}

void accumulate_shape(const Formula& f, std::vector<DigitShape>& shape) {
  const auto& nd = f.node();
  auto widen = [&](unsigned i, std::uint64_t t) {
    if (i < shape.size()) shape[i].threshold = std::max(shape[i].threshold, t);
  };
  switch (nd.op) {
    case Formula::Op::DigitEq: widen(nd.digit, nd.a + 1); break;
    case Formula::Op::DigitGe:
    case Formula::Op::DigitGeN: widen(nd.digit, nd.op == Formula::Op::DigitGe ? nd.a : nd.b); break;
    case Formula::Op::DigitMod:
      if (nd.digit < shape.size()) shape[nd.digit].modulus = std::lcm(shape[nd.digit].modulus, nd.a);
      break;
    case Formula::Op::OrdLt:
    case Formula::Op::OrdGe:
    case Formula::Op::GeParam:
    case Formula::Op::LtParam:
      for (const auto& t : nd.ord.terms()) widen(t.exponent, t.coefficient + 1);
      break;
    default: break;
  }
  for (const auto& k : nd.kids) accumulate_shape(k, shape);
}

}  // namespace transfinite
