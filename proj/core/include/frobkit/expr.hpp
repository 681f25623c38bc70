#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace frobkit {

/// Guard used by division (and negative powers) when none is given:
/// evaluation fails where |denominator| < guard.
inline constexpr double kDefaultDivisionGuard = 1e-12;

/// Immutable scalar expression over variables x_1..x_m.
///
/// The node set (constants, variables, + - * /, integer powers, sin, cos,
/// exp) is closed under symbolic differentiation. Division nodes declare a
/// guard |den| >= eps; evaluating inside the guard throws GuardViolation.
/// Constructors fold constants and drop neutral elements, which keeps
/// derivative trees small.
class Expr {
 public:
  enum class Kind { kConstant, kVariable, kAdd, kSub, kMul, kDiv, kNeg, kPow,
                    kSin, kCos, kExp };

  Expr(double value);  // NOLINT: implicit constants read naturally.
  Expr() : Expr(0.0) {}

  /// x_{index+1}; indices are zero-based.
  static Expr variable(int index);
  static Expr divide(Expr num, Expr den, double guard = kDefaultDivisionGuard);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::kConstant; }
  bool is_constant(double c) const { return is_constant() && value() == c; }
  double value() const;
  int variable_index() const;
  int exponent() const;
  double guard() const;
  int arity() const;
  const Expr& operand(int i) const;

  /// Largest variable index used, or -1 for closed expressions.
  int max_variable() const;

  double evaluate(std::span<const double> x) const;
  Expr derivative(int var) const;

  /// Fully parenthesised text that parse_expression() reads back.
  std::string to_string(std::span<const std::string> names = {}) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, int exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);

  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Kind kind, std::vector<Expr> children, int exponent = 0,
                   double guard = 0.0);

  std::shared_ptr<const Node> node_;
};

}  // namespace frobkit
