#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frobkit/distribution.hpp"

namespace frobkit {

/// Contents of a field definition file.
///
///   n = 3
///   domain = [0,1] x [0,1] x [0,1]   # optional, defaults to the unit cube
///   v1 = [1, 0, 0]
///   v2 = [0, 1, x1]
///   density = 1                      # optional
///   tau = [1, x1, 0]                 # optional, one entry per I(n,k)
///
/// Statements end at a newline or ';'. When `n` is omitted it is taken from
/// the length of v1.
struct FieldDefinition {
  int n = 0;
  Box domain;
  std::vector<KVectorField> vectors;
  std::optional<Expr> density;
  std::optional<KVectorField> tau;

  /// Throws Error when no vectorfield is declared.
  Frame frame() const;
};

/// Parses an expression over x1..xn. Throws ParseError.
Expr parse_expression(std::string_view text, int n);

/// Throws ParseError (syntax, arity, unknown identifiers, located 1-based).
FieldDefinition parse_fields(std::string_view text);

/// Text that parse_fields() reads back to an equal definition.
std::string pretty_print(const FieldDefinition& def);

}  // namespace frobkit
