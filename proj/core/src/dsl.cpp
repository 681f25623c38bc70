#include "frobkit/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "frobkit/error.hpp"
#include "frobkit/multi_index.hpp"

namespace frobkit {

namespace {

enum class Tok { kNumber, kIdent, kOp, kSeparator, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double value = 0.0;
  std::size_t line = 1;
  std::size_t col = 1;
};

// Newlines only separate statements outside brackets.
std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  int depth = 0;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    Token t;
    t.line = line;
    t.col = col;
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n' || c == ';') {
      if (depth == 0 || c == ';') {
        t.kind = Tok::kSeparator;
        t.text = c == ';' ? ";" : "newline";
        out.push_back(t);
      }
      advance(1);
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) {
        ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      t.kind = Tok::kNumber;
      t.text = std::string(src.substr(i, j - i));
      auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                                       t.value);
      if (ec != std::errc() || end != t.text.data() + t.text.size()) {
        throw ParseError("malformed number '" + t.text + "'", line, col);
      }
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_')) {
        ++j;
      }
      t.kind = Tok::kIdent;
      t.text = std::string(src.substr(i, j - i));
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::string_view("+-*/^()[],=").find(c) != std::string_view::npos) {
      if (c == '(' || c == '[') ++depth;
      if ((c == ')' || c == ']') && depth > 0) --depth;
      t.kind = Tok::kOp;
      t.text = std::string(1, c);
      out.push_back(t);
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd:
      return "end of input";
    case Tok::kSeparator:
      return t.text == ";" ? "';'" : "end of line";
    default:
      return "'" + t.text + "'";
  }
}

struct VariableUse {
  int index;
  std::size_t line;
  std::size_t col;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_op(char c) const {
    return peek().kind == Tok::kOp && peek().text[0] == c;
  }
  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    throw ParseError(what, t.line, t.col);
  }
  // Closes a bracket opened at `open`; a missing closer is reported there.
  void close(char c, const Token& open) {
    if (!at_op(c)) {
      fail("unclosed '" + open.text + "' (found " + describe(peek()) + ")", open);
    }
    next();
  }
  const Token& expect_op(char c) {
    if (!at_op(c)) {
      fail(std::string("expected '") + c + "' but found " + describe(peek()),
           peek());
    }
    return next();
  }

  // expr := term (('+' | '-') term)*
  Expr expression() {
    Expr e = term();
    while (at_op('+') || at_op('-')) {
      const char op = next().text[0];
      Expr rhs = term();
      e = op == '+' ? e + rhs : e - rhs;
    }
    return e;
  }

  // term := unary (('*' | '/') unary)*
  Expr term() {
    Expr e = unary();
    while (at_op('*') || at_op('/')) {
      const char op = next().text[0];
      Expr rhs = unary();
      e = op == '*' ? e * rhs : Expr::divide(e, rhs);
    }
    return e;
  }

  // unary := ('-' | '+') unary | power
  Expr unary() {
    if (at_op('-')) {
      next();
      return -unary();
    }
    if (at_op('+')) {
      next();
      return unary();
    }
    return power();
  }

  // power := primary ('^' integer)*
  Expr power() {
    Expr e = primary();
    while (at_op('^')) {
      next();
      int sign = 1;
      if (at_op('-') || at_op('+')) sign = next().text[0] == '-' ? -1 : 1;
      const Token& t = peek();
      if (t.kind != Tok::kNumber || t.value != std::floor(t.value) ||
          t.value > 1024) {
        fail("integer exponent expected, found " + describe(t), t);
      }
      next();
      e = pow(e, sign * static_cast<int>(t.value));
    }
    return e;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::kNumber) {
      next();
      return Expr(t.value);
    }
    if (at_op('(')) {
      const Token open = next();
      Expr e = expression();
      close(')', open);
      return e;
    }
    if (t.kind == Tok::kIdent) {
      next();
      if (t.text == "sin" || t.text == "cos" || t.text == "exp") {
        const Token open = expect_op('(');
        Expr arg = expression();
        close(')', open);
        if (t.text == "sin") return sin(arg);
        if (t.text == "cos") return cos(arg);
        return exp(arg);
      }
      if (t.text.size() > 1 && t.text[0] == 'x' &&
          t.text.find_first_not_of("0123456789", 1) == std::string::npos &&
          t.text[1] != '0' && t.text.size() <= 3) {
        const int index = std::stoi(t.text.substr(1)) - 1;
        uses_.push_back(VariableUse{index, t.line, t.col});
        return Expr::variable(index);
      }
      fail("unknown identifier '" + t.text + "'", t);
    }
    fail("expected an expression but found " + describe(t), t);
  }

  // '[' expr (',' expr)* ']'
  std::vector<Expr> list() {
    const Token open = expect_op('[');
    std::vector<Expr> out{expression()};
    while (at_op(',')) {
      next();
      out.push_back(expression());
    }
    close(']', open);
    return out;
  }

  double constant() {
    const Token& at = peek();
    const std::size_t before = uses_.size();
    const Expr e = expression();
    if (uses_.size() != before) fail("constant expected", at);
    return e.evaluate(std::span<const double>{});
  }

  void end_statement() {
    if (peek().kind == Tok::kSeparator) {
      next();
    } else if (peek().kind != Tok::kEnd) {
      fail("expected end of statement but found " + describe(peek()), peek());
    }
  }

  void check_variables(std::size_t from, int n) const {
    for (std::size_t i = from; i < uses_.size(); ++i) {
      if (uses_[i].index >= n) {
        throw ParseError("unknown identifier 'x" +
                             std::to_string(uses_[i].index + 1) +
                             "' (n = " + std::to_string(n) + ")",
                         uses_[i].line, uses_[i].col);
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<VariableUse> uses_;
};

struct ListDecl {
  std::vector<Expr> items;
  Token at;
};

}  // namespace

Frame FieldDefinition::frame() const {
  if (vectors.empty()) throw Error("field definition declares no vectorfield");
  return Frame(vectors);
}

Expr parse_expression(std::string_view text, int n) {
  Parser p(text);
  Expr e = p.expression();
  if (p.peek().kind != Tok::kEnd) {
    p.fail("unexpected " + describe(p.peek()), p.peek());
  }
  p.check_variables(0, n);
  return e;
}

FieldDefinition parse_fields(std::string_view text) {
  Parser p(text);
  std::optional<int> n;
  Token n_at;
  std::optional<std::vector<std::pair<double, double>>> domain;
  Token domain_at;
  std::map<int, ListDecl> vectors;
  std::optional<Expr> density;
  std::optional<ListDecl> tau;
  std::map<std::string, bool> seen;

  while (p.peek().kind != Tok::kEnd) {
    if (p.peek().kind == Tok::kSeparator) {
      p.next();
      continue;
    }
    const Token name = p.peek();
    if (name.kind != Tok::kIdent) {
      p.fail("expected a declaration but found " + describe(name), name);
    }
    p.next();
    if (seen[name.text]) p.fail("duplicate declaration of '" + name.text + "'", name);
    seen[name.text] = true;
    p.expect_op('=');
    if (name.text == "n") {
      const Token& t = p.peek();
      if (t.kind != Tok::kNumber || t.value != std::floor(t.value) ||
          t.value < 1 || t.value > kMaxDimension) {
        p.fail("n must be an integer in [1, " + std::to_string(kMaxDimension) + "]",
               t);
      }
      n = static_cast<int>(t.value);
      n_at = t;
      p.next();
    } else if (name.text == "domain") {
      domain_at = p.peek();
      domain.emplace();
      while (true) {
        const Token open = p.expect_op('[');
        const double a = p.constant();
        p.expect_op(',');
        const double b = p.constant();
        p.close(']', open);
        if (!(b > a)) p.fail("empty interval", open);
        domain->emplace_back(a, b);
        if (p.peek().kind == Tok::kIdent && p.peek().text == "x") {
          p.next();
        } else {
          break;
        }
      }
    } else if (name.text == "density") {
      density = p.expression();
    } else if (name.text == "tau") {
      const Token at = p.peek();
      tau = ListDecl{p.list(), at};
    } else if (name.text.size() > 1 && name.text[0] == 'v' &&
               name.text.find_first_not_of("0123456789", 1) == std::string::npos &&
               name.text[1] != '0' && name.text.size() <= 3) {
      const Token at = p.peek();
      vectors[std::stoi(name.text.substr(1))] = ListDecl{p.list(), at};
    } else {
      p.fail("unknown identifier '" + name.text + "'", name);
    }
    p.end_statement();
  }

  FieldDefinition def;
  if (n) {
    def.n = *n;
  } else if (!vectors.empty()) {
    def.n = static_cast<int>(vectors.begin()->second.items.size());
    if (def.n > kMaxDimension) {
      p.fail("too many components", vectors.begin()->second.at);
    }
  } else {
    throw ParseError("missing declaration 'n'", 1, 1);
  }
  p.check_variables(0, def.n);

  if (domain) {
    if (static_cast<int>(domain->size()) != def.n) {
      p.fail("domain has " + std::to_string(domain->size()) +
                 " intervals but n = " + std::to_string(def.n),
             domain_at);
    }
    def.domain.lo.resize(def.n);
    def.domain.hi.resize(def.n);
    for (int i = 0; i < def.n; ++i) {
      def.domain.lo[i] = (*domain)[i].first;
      def.domain.hi[i] = (*domain)[i].second;
    }
  } else {
    def.domain = Box::cube(def.n, 0, 1);
  }

  int expected = 1;
  for (auto& [index, decl] : vectors) {
    if (index != expected) {
      p.fail("v" + std::to_string(index) + " declared without v" +
                 std::to_string(expected),
             decl.at);
    }
    ++expected;
    if (static_cast<int>(decl.items.size()) != def.n) {
      p.fail("v" + std::to_string(index) + " has " +
                 std::to_string(decl.items.size()) + " components, expected " +
                 std::to_string(def.n),
             decl.at);
    }
    def.vectors.emplace_back(1, std::move(decl.items), def.domain);
  }
  def.density = density;
  if (tau) {
    const int k = static_cast<int>(def.vectors.size());
    if (k == 0) p.fail("tau needs the vectorfields v1..vk", tau->at);
    const std::size_t count = binomial(def.n, k);
    if (tau->items.size() != count) {
      p.fail("tau has " + std::to_string(tau->items.size()) +
                 " components, expected " + std::to_string(count),
             tau->at);
    }
    def.tau = KVectorField(k, std::move(tau->items), def.domain);
  }
  return def;
}

namespace {

std::string number(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, end);
}

std::string list_text(const std::vector<Expr>& items) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ", ";
    s += items[i].to_string();
  }
  return s + "]";
}

template <class F>
std::vector<Expr> components(const F& field) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < binomial(field.n(), field.k()); ++i) {
    out.push_back(field.component(i));
  }
  return out;
}

}  // namespace

std::string pretty_print(const FieldDefinition& def) {
  std::string s = "n = " + std::to_string(def.n) + "\ndomain = ";
  for (int i = 0; i < def.n; ++i) {
    if (i) s += " x ";
    s += "[" + number(def.domain.lo[i]) + ", " + number(def.domain.hi[i]) + "]";
  }
  s += "\n";
  for (std::size_t i = 0; i < def.vectors.size(); ++i) {
    s += "v" + std::to_string(i + 1) + " = " +
         list_text(components(def.vectors[i])) + "\n";
  }
  if (def.density) s += "density = " + def.density->to_string() + "\n";
  if (def.tau) s += "tau = " + list_text(components(*def.tau)) + "\n";
  return s;
}

}  // namespace frobkit
