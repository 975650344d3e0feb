#pragma once

// A small piecewise-function language for user-defined maps N -> N:
//
//   spec  := case+
//   case  := "when" bool "->" expr ";"
//   bool  := cmp (("and" | "or") cmp)*        left to right, no precedence
//   cmp   := expr ("<" | "<=" | "==" | ">=" | ">") expr
//   expr  := term (("+" | "-") term)*
//   term  := atom (("*" | "div" | "mod") atom)*
//   atom  := integer | "k" | "i" | "pow2" "(" expr ")" | "blog" "(" expr ")" | "(" expr ")"
//
// "i" is blog(k) = floor(log2 k). Arithmetic is on naturals (0 allowed as an
// intermediate) and every overflow, underflow or division by zero is an error.
// The first case whose guard holds gives the value. '#' starts a line comment.

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "natdens/interval.hpp"
#include "natdens/maps.hpp"
#include "natdens/nat.hpp"

namespace natdens::dsl {

class parse_error : public error {
 public:
  parse_error(std::size_t line, std::size_t column, std::string message, std::vector<std::string> expected)
      : error(format(line, column, message, expected)),
        line_(line),
        column_(column),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string s = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    if (!expected.empty()) {
      s += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
      s += ")";
    }
    return s;
  }

  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::vector<std::string> expected_;
};

class eval_error : public error {
 public:
  eval_error(nat k, const std::string& what) : error("at k=" + std::to_string(k) + ": " + what), k_(k) {}
  nat k() const { return k_; }

 private:
  nat k_;
};

enum class expr_op { literal, var_k, var_i, add, sub, mul, div, mod, pow2, blog };

struct expr;
using expr_ptr = std::shared_ptr<const expr>;

struct expr {
  expr_op op;
  nat value = 0;  // literal only
  expr_ptr lhs;   // binary operands, or the argument of pow2/blog
  expr_ptr rhs;
};

enum class cmp_op { lt, le, eq, ge, gt };
enum class logic_op { and_, or_ };

struct comparison {
  cmp_op op;
  expr_ptr lhs;
  expr_ptr rhs;
};

struct guard {
  std::vector<comparison> terms;
  std::vector<logic_op> joins;  // joins[i] sits between terms[i] and terms[i+1]
};

struct map_case {
  guard when;
  expr_ptr body;
  std::size_t first_line = 0;
  std::size_t last_line = 0;
};

struct map_spec {
  std::vector<map_case> cases;
  std::string source;
  std::string file;
};

namespace detail {

enum class tok {
  end, integer, when, and_, or_, div, mod, pow2, blog, k, i, arrow, semi, lt, le, eq, ge, gt, plus, minus, star,
  lparen, rparen
};

struct token {
  tok kind;
  std::string text;
  nat value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::string describe(const token& t) { return t.kind == tok::end ? "end of input" : "'" + t.text + "'"; }

inline std::vector<token> lex(std::string_view src) {
  std::vector<token> out;
  std::size_t line = 1, col = 1, pos = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  };
  while (pos < src.size()) {
    const char c = src[pos];
    if (c == '#') {
      while (pos < src.size() && src[pos] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    token t{tok::end, "", 0, line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      nat v = 0;
      while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) {
        nat next;
        if (__builtin_mul_overflow(v, nat{10}, &next) || __builtin_add_overflow(next, nat(src[end] - '0'), &v)) {
          throw parse_error(line, col, "integer literal too large", {});
        }
        ++end;
      }
      t.kind = tok::integer;
      t.value = v;
      t.text = std::string(src.substr(pos, end - pos));
      advance(end - pos);
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos;
      while (end < src.size() && (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_')) ++end;
      t.text = std::string(src.substr(pos, end - pos));
      static const std::pair<std::string_view, tok> words[] = {
          {"when", tok::when}, {"and", tok::and_}, {"or", tok::or_},   {"div", tok::div}, {"mod", tok::mod},
          {"pow2", tok::pow2}, {"blog", tok::blog}, {"k", tok::k},     {"i", tok::i}};
      bool known = false;
      for (const auto& [w, kind] : words) {
        if (t.text == w) {
          t.kind = kind;
          known = true;
        }
      }
      if (!known) throw parse_error(line, col, "unknown identifier '" + t.text + "'", {"k", "i", "pow2", "blog"});
      advance(end - pos);
      out.push_back(t);
      continue;
    }
    auto two = src.substr(pos, 2);
    static const std::pair<std::string_view, tok> symbols[] = {
        {"->", tok::arrow}, {"<=", tok::le},   {">=", tok::ge},    {"==", tok::eq},    {"<", tok::lt},
        {">", tok::gt},     {";", tok::semi},  {"+", tok::plus},   {"-", tok::minus},  {"*", tok::star},
        {"(", tok::lparen}, {")", tok::rparen}};
    bool matched = false;
    for (const auto& [sym, kind] : symbols) {
      if (two.substr(0, sym.size()) == sym) {
        t.kind = kind;
        t.text = std::string(sym);
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw parse_error(line, col, std::string("unexpected character '") + c + "'", {});
    out.push_back(t);
  }
  out.push_back(token{tok::end, "", 0, line, col});
  return out;
}

class parser {
 public:
  explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

  std::vector<map_case> spec() {
    std::vector<map_case> cases;
    if (peek().kind == tok::end) fail("empty map specification", {"'when'"});
    while (peek().kind != tok::end) cases.push_back(one_case());
    return cases;
  }

 private:
  const token& peek() const { return toks_[pos_]; }
  token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw parse_error(peek().line, peek().column, msg, std::move(expected));
  }

  void expect(tok kind, const char* spelled) {
    if (peek().kind != kind) fail(std::string("expected ") + spelled + ", found " + describe(peek()), {spelled});
    ++pos_;
  }

  map_case one_case() {
    map_case c;
    c.first_line = peek().line;
    if (peek().kind != tok::when) fail("expected 'when', found " + describe(peek()), {"'when'"});
    ++pos_;
    c.when = parse_guard();
    expect(tok::arrow, "'->'");
    c.body = parse_expr();
    c.last_line = peek().line;
    expect(tok::semi, "';'");
    return c;
  }

  guard parse_guard() {
    guard g;
    g.terms.push_back(parse_comparison());
    while (peek().kind == tok::and_ || peek().kind == tok::or_) {
      g.joins.push_back(take().kind == tok::and_ ? logic_op::and_ : logic_op::or_);
      g.terms.push_back(parse_comparison());
    }
    return g;
  }

  comparison parse_comparison() {
    comparison c;
    c.lhs = parse_expr();
    switch (peek().kind) {
      case tok::lt: c.op = cmp_op::lt; break;
      case tok::le: c.op = cmp_op::le; break;
      case tok::eq: c.op = cmp_op::eq; break;
      case tok::ge: c.op = cmp_op::ge; break;
      case tok::gt: c.op = cmp_op::gt; break;
      default: fail("expected a comparison operator, found " + describe(peek()), {"'<'", "'<='", "'=='", "'>='", "'>'"});
    }
    ++pos_;
    c.rhs = parse_expr();
    return c;
  }

  expr_ptr parse_expr() {
    expr_ptr lhs = parse_term();
    while (peek().kind == tok::plus || peek().kind == tok::minus) {
      const expr_op op = take().kind == tok::plus ? expr_op::add : expr_op::sub;
      lhs = std::make_shared<const expr>(expr{op, 0, lhs, parse_term()});
    }
    return lhs;
  }

  expr_ptr parse_term() {
    expr_ptr lhs = parse_atom();
    while (peek().kind == tok::star || peek().kind == tok::div || peek().kind == tok::mod) {
      const tok k = take().kind;
      const expr_op op = k == tok::star ? expr_op::mul : k == tok::div ? expr_op::div : expr_op::mod;
      lhs = std::make_shared<const expr>(expr{op, 0, lhs, parse_atom()});
    }
    return lhs;
  }

  expr_ptr parse_atom() {
    const token& t = peek();
    switch (t.kind) {
      case tok::integer: ++pos_; return std::make_shared<const expr>(expr{expr_op::literal, t.value, nullptr, nullptr});
      case tok::k: ++pos_; return std::make_shared<const expr>(expr{expr_op::var_k, 0, nullptr, nullptr});
      case tok::i: ++pos_; return std::make_shared<const expr>(expr{expr_op::var_i, 0, nullptr, nullptr});
      case tok::pow2:
      case tok::blog: {
        const expr_op op = t.kind == tok::pow2 ? expr_op::pow2 : expr_op::blog;
        ++pos_;
        expect(tok::lparen, "'('");
        expr_ptr arg = parse_expr();
        expect(tok::rparen, "')'");
        return std::make_shared<const expr>(expr{op, 0, arg, nullptr});
      }
      case tok::lparen: {
        ++pos_;
        expr_ptr inner = parse_expr();
        expect(tok::rparen, "')'");
        return inner;
      }
      case tok::when:
      case tok::and_:
      case tok::or_:
      case tok::div:
      case tok::mod:
        fail("reserved word '" + t.text + "' cannot start an expression", atom_starts());
      default: fail("expected an expression, found " + describe(t), atom_starts());
    }
  }

  static std::vector<std::string> atom_starts() { return {"integer", "'k'", "'i'", "'pow2'", "'blog'", "'('"}; }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
};

inline nat eval_expr(const expr& e, nat k) {
  switch (e.op) {
    case expr_op::literal: return e.value;
    case expr_op::var_k: return k;
    case expr_op::var_i: return floor_log2(k);
    case expr_op::pow2: {
      const nat x = eval_expr(*e.lhs, k);
      if (x >= 64) throw overflow_error("pow2(" + std::to_string(x) + ")");
      return pow2(static_cast<unsigned>(x));
    }
    case expr_op::blog: {
      const nat x = eval_expr(*e.lhs, k);
      if (x == 0) throw error("blog(0) is undefined");
      return floor_log2(x);
    }
    default: break;
  }
  const nat x = eval_expr(*e.lhs, k);
  const nat y = eval_expr(*e.rhs, k);
  switch (e.op) {
    case expr_op::add: return checked_add(x, y);
    case expr_op::sub: return checked_sub(x, y);
    case expr_op::mul: return checked_mul(x, y);
    case expr_op::div:
      if (y == 0) throw error("division by zero");
      return x / y;
    case expr_op::mod:
      if (y == 0) throw error("modulo by zero");
      return x % y;
    default: throw error("malformed expression");
  }
}

inline bool eval_comparison(const comparison& c, nat k) {
  const nat x = eval_expr(*c.lhs, k);
  const nat y = eval_expr(*c.rhs, k);
  switch (c.op) {
    case cmp_op::lt: return x < y;
    case cmp_op::le: return x <= y;
    case cmp_op::eq: return x == y;
    case cmp_op::ge: return x >= y;
    case cmp_op::gt: return x > y;
  }
  return false;
}

inline bool eval_guard(const guard& g, nat k) {
  bool v = eval_comparison(g.terms[0], k);
  for (std::size_t j = 0; j < g.joins.size(); ++j) {
    if (g.joins[j] == logic_op::and_) {
      v = v && eval_comparison(g.terms[j + 1], k);
    } else {
      v = v || eval_comparison(g.terms[j + 1], k);
    }
  }
  return v;
}

inline int precedence(expr_op op) {
  switch (op) {
    case expr_op::add:
    case expr_op::sub: return 1;
    case expr_op::mul:
    case expr_op::div:
    case expr_op::mod: return 2;
    default: return 3;
  }
}

inline void print_expr(std::ostream& os, const expr& e, int parent, bool right) {
  const int p = precedence(e.op);
  const bool parens = p < parent || (p == parent && right);
  if (parens) os << '(';
  switch (e.op) {
    case expr_op::literal: os << e.value; break;
    case expr_op::var_k: os << 'k'; break;
    case expr_op::var_i: os << 'i'; break;
    case expr_op::pow2:
    case expr_op::blog:
      os << (e.op == expr_op::pow2 ? "pow2(" : "blog(");
      print_expr(os, *e.lhs, 0, false);
      os << ')';
      break;
    default: {
      static const char* names[] = {"", "", "", " + ", " - ", " * ", " div ", " mod "};
      print_expr(os, *e.lhs, p, false);
      os << names[static_cast<int>(e.op)];
      print_expr(os, *e.rhs, p, true);
    }
  }
  if (parens) os << ')';
}

inline bool same_expr(const expr& x, const expr& y) {
  if (x.op != y.op || x.value != y.value) return false;
  if ((x.lhs == nullptr) != (y.lhs == nullptr) || (x.rhs == nullptr) != (y.rhs == nullptr)) return false;
  if (x.lhs && !same_expr(*x.lhs, *y.lhs)) return false;
  return !x.rhs || same_expr(*x.rhs, *y.rhs);
}

}  // namespace detail

inline map_spec parse(std::string_view text, std::string file = "<input>") {
  detail::parser p(detail::lex(text));
  map_spec spec{p.spec(), std::string(text), std::move(file)};
  return spec;
}

/// Value of the first case whose guard holds. May be 0; callers that need an
/// element of N check that themselves.
inline nat eval(const map_spec& spec, nat k) {
  require_positive(k, "k");
  try {
    for (const auto& c : spec.cases) {
      if (detail::eval_guard(c.when, k)) return detail::eval_expr(*c.body, k);
    }
  } catch (const eval_error&) {
    throw;
  } catch (const error& e) {
    throw eval_error(k, e.what());
  }
  throw eval_error(k, "no case matches (specification is not total here)");
}

/// Index of the first case whose guard holds at k, if any.
inline std::optional<std::size_t> matching_case(const map_spec& spec, nat k) {
  for (std::size_t j = 0; j < spec.cases.size(); ++j) {
    if (detail::eval_guard(spec.cases[j].when, k)) return j;
  }
  return std::nullopt;
}

/// Canonical source text; parse(pretty(s)) has the same structure as s.
inline std::string pretty(const map_spec& spec) {
  static const char* cmp_names[] = {" < ", " <= ", " == ", " >= ", " > "};
  std::ostringstream os;
  for (const auto& c : spec.cases) {
    os << "when ";
    for (std::size_t j = 0; j < c.when.terms.size(); ++j) {
      if (j > 0) os << (c.when.joins[j - 1] == logic_op::and_ ? " and " : " or ");
      const auto& t = c.when.terms[j];
      detail::print_expr(os, *t.lhs, 0, false);
      os << cmp_names[static_cast<int>(t.op)];
      detail::print_expr(os, *t.rhs, 0, false);
    }
    os << " -> ";
    detail::print_expr(os, *c.body, 0, false);
    os << ";\n";
  }
  return os.str();
}

/// Structural equality of the case lists (source text and positions ignored).
inline bool same_structure(const map_spec& x, const map_spec& y) {
  if (x.cases.size() != y.cases.size()) return false;
  for (std::size_t j = 0; j < x.cases.size(); ++j) {
    const auto& cx = x.cases[j];
    const auto& cy = y.cases[j];
    if (cx.when.terms.size() != cy.when.terms.size() || cx.when.joins != cy.when.joins) return false;
    for (std::size_t t = 0; t < cx.when.terms.size(); ++t) {
      const auto& a = cx.when.terms[t];
      const auto& b = cy.when.terms[t];
      if (a.op != b.op || !detail::same_expr(*a.lhs, *b.lhs) || !detail::same_expr(*a.rhs, *b.rhs)) return false;
    }
    if (!detail::same_expr(*cx.body, *cy.body)) return false;
  }
  return true;
}

/// A DSL specification used as a map. No inverse, fast preimage or reach bound.
class dsl_map final : public map1to1 {
 public:
  dsl_map(map_spec spec, std::string name) : spec_(std::move(spec)), name_(std::move(name)) {}

  nat apply(nat n) const override {
    const nat v = eval(spec_, n);
    if (v == 0) throw eval_error(n, "value 0 is not a natural number");
    return v;
  }

  const map_spec& spec() const { return spec_; }
  std::string name() const override { return name_; }

 private:
  map_spec spec_;
  std::string name_;
};

struct eval_failure {
  nat k;
  std::string message;
};

struct check_report {
  interval window{1, 1};
  bool total = true;
  std::optional<nat> first_uncovered;  // first k with no matching guard
  std::optional<eval_failure> first_failure;  // first k whose evaluation errored (any reason)
  bool injective = true;
  std::optional<collision> found;
};

/// Totality and injectivity of a specification on a window. Points whose
/// evaluation fails are reported and left out of the injectivity check.
inline check_report check(const map_spec& spec, const interval& window) {
  if (window.size() > (nat{1} << 22)) throw error("dsl check window larger than 2^22");
  check_report rep;
  rep.window = window;
  std::vector<std::pair<nat, nat>> points;
  points.reserve(window.size());
  const dsl_map f(spec, "dsl");
  for (nat k = window.a();; ++k) {
    try {
      if (!matching_case(spec, k)) {
        if (rep.total) rep.first_uncovered = k;
        rep.total = false;
        throw eval_error(k, "no case matches (specification is not total here)");
      }
      points.emplace_back(k, f.apply(k));
    } catch (const error& e) {
      if (!rep.first_failure) rep.first_failure = eval_failure{k, e.what()};
    }
    if (k == window.b()) break;
  }
  if (!rep.first_failure) {
    auto inj = verify_injective(f, window);
    rep.injective = inj.ok;
    rep.found = inj.found;
  } else {
    rep.found = first_collision(std::move(points));
    rep.injective = !rep.found.has_value();
  }
  return rep;
}

}  // namespace natdens::dsl
