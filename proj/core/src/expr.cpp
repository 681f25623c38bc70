#include "frobkit/expr.hpp"

#include <charconv>
#include <cmath>

#include "frobkit/error.hpp"

namespace frobkit {

struct Expr::Node {
  Kind kind = Kind::kConstant;
  double value = 0.0;
  int index = 0;  // variable index or integer exponent
  double guard = 0.0;
  std::vector<Expr> children;
};

Expr::Expr(double value) {
  auto node = std::make_shared<Node>();
  node->value = value;
  node_ = std::move(node);
}

Expr Expr::variable(int index) {
  if (index < 0) throw Error("negative variable index");
  auto node = std::make_shared<Node>();
  node->kind = Kind::kVariable;
  node->index = index;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::make(Kind kind, std::vector<Expr> children, int exponent,
                double guard) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->index = exponent;
  node->guard = guard;
  node->children = std::move(children);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::variable_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
double Expr::guard() const { return node_->guard; }
int Expr::arity() const { return static_cast<int>(node_->children.size()); }
const Expr& Expr::operand(int i) const { return node_->children.at(i); }

int Expr::max_variable() const {
  if (kind() == Kind::kVariable) return variable_index();
  int m = -1;
  for (const auto& c : node_->children) m = std::max(m, c.max_variable());
  return m;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::make(Expr::Kind::kAdd, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::make(Expr::Kind::kSub, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expr::make(Expr::Kind::kMul, {a, b});
}

Expr Expr::divide(Expr num, Expr den, double guard) {
  if (num.is_constant(0.0)) return Expr(0.0);
  if (den.is_constant(1.0)) return num;
  if (den.is_constant() && std::abs(den.value()) >= guard) {
    if (num.is_constant()) return Expr(num.value() / den.value());
    return num * Expr(1.0 / den.value());
  }
  return make(Kind::kDiv, {std::move(num), std::move(den)}, 0, guard);
}

Expr operator/(const Expr& a, const Expr& b) { return Expr::divide(a, b); }

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.value());
  if (a.kind() == Expr::Kind::kNeg) return a.operand(0);
  return Expr::make(Expr::Kind::kNeg, {a});
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && (exponent > 0 || base.value() != 0.0)) {
    return Expr(std::pow(base.value(), exponent));
  }
  return Expr::make(Expr::Kind::kPow, {base}, exponent,
                    exponent < 0 ? kDefaultDivisionGuard : 0.0);
}

Expr sin(const Expr& a) {
  if (a.is_constant()) return Expr(std::sin(a.value()));
  return Expr::make(Expr::Kind::kSin, {a});
}

Expr cos(const Expr& a) {
  if (a.is_constant()) return Expr(std::cos(a.value()));
  return Expr::make(Expr::Kind::kCos, {a});
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr(std::exp(a.value()));
  return Expr::make(Expr::Kind::kExp, {a});
}

double Expr::evaluate(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
      return n.value;
    case Kind::kVariable:
      if (static_cast<std::size_t>(n.index) >= x.size()) {
        throw DimensionMismatch("expression uses x" +
                                std::to_string(n.index + 1) +
                                " but the point has " +
                                std::to_string(x.size()) + " coordinates");
      }
      return x[n.index];
    case Kind::kAdd:
      return n.children[0].evaluate(x) + n.children[1].evaluate(x);
    case Kind::kSub:
      return n.children[0].evaluate(x) - n.children[1].evaluate(x);
    case Kind::kMul:
      return n.children[0].evaluate(x) * n.children[1].evaluate(x);
    case Kind::kDiv: {
      const double den = n.children[1].evaluate(x);
      if (!(std::abs(den) >= n.guard)) {
        throw GuardViolation("division guard violated: |" +
                             n.children[1].to_string() + "| < " +
                             std::to_string(n.guard));
      }
      return n.children[0].evaluate(x) / den;
    }
    case Kind::kNeg:
      return -n.children[0].evaluate(x);
    case Kind::kPow: {
      const double b = n.children[0].evaluate(x);
      if (n.index < 0 && !(std::abs(b) >= n.guard)) {
        throw GuardViolation("negative power of a value inside the guard");
      }
      double r = 1.0;
      double base = n.index < 0 ? 1.0 / b : b;
      for (int e = std::abs(n.index); e > 0; e >>= 1) {
        if (e & 1) r *= base;
        base *= base;
      }
      return r;
    }
    case Kind::kSin:
      return std::sin(n.children[0].evaluate(x));
    case Kind::kCos:
      return std::cos(n.children[0].evaluate(x));
    case Kind::kExp:
      return std::exp(n.children[0].evaluate(x));
  }
  return 0.0;
}

Expr Expr::derivative(int var) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConstant:
      return Expr(0.0);
    case Kind::kVariable:
      return Expr(n.index == var ? 1.0 : 0.0);
    case Kind::kAdd:
      return n.children[0].derivative(var) + n.children[1].derivative(var);
    case Kind::kSub:
      return n.children[0].derivative(var) - n.children[1].derivative(var);
    case Kind::kMul: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      return a.derivative(var) * b + a * b.derivative(var);
    }
    case Kind::kDiv: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      const Expr num = a.derivative(var) * b - a * b.derivative(var);
      return divide(num, pow(b, 2), n.guard * n.guard);
    }
    case Kind::kNeg:
      return -n.children[0].derivative(var);
    case Kind::kPow: {
      const Expr& a = n.children[0];
      return Expr(static_cast<double>(n.index)) * pow(a, n.index - 1) *
             a.derivative(var);
    }
    case Kind::kSin:
      return cos(n.children[0]) * n.children[0].derivative(var);
    case Kind::kCos:
      return -(sin(n.children[0]) * n.children[0].derivative(var));
    case Kind::kExp:
      return *this * n.children[0].derivative(var);
  }
  return Expr(0.0);
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  std::string s(buf, end);
  if (v < 0) return "(" + s + ")";
  return s;
}

}  // namespace

std::string Expr::to_string(std::span<const std::string> names) const {
  const Node& n = *node_;
  auto child = [&](int i) { return n.children[i].to_string(names); };
  switch (n.kind) {
    case Kind::kConstant:
      return format_number(n.value);
    case Kind::kVariable:
      if (static_cast<std::size_t>(n.index) < names.size()) {
        return names[n.index];
      }
      return "x" + std::to_string(n.index + 1);
    case Kind::kAdd:
      return "(" + child(0) + " + " + child(1) + ")";
    case Kind::kSub:
      return "(" + child(0) + " - " + child(1) + ")";
    case Kind::kMul:
      return "(" + child(0) + " * " + child(1) + ")";
    case Kind::kDiv:
      return "(" + child(0) + " / " + child(1) + ")";
    case Kind::kNeg:
      return "(-" + child(0) + ")";
    case Kind::kPow:
      return "(" + child(0) + "^" + std::to_string(n.index) + ")";
    case Kind::kSin:
      return "sin(" + child(0) + ")";
    case Kind::kCos:
      return "cos(" + child(0) + ")";
    case Kind::kExp:
      return "exp(" + child(0) + ")";
  }
  return "";
}

}  // namespace frobkit
