#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hypercalc/expr.hpp"

namespace hypercalc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the expression mini-language:
///
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | factor
///   factor := base ('^' ['-'] integer)?
///   base   := 't' | 's' | 'x'digit+ | 'r2' | integer | '(' expr ')' | atom
///   atom   := ident ('[' partials (';' boosts)? ']')? | ident '<' integer '>' '(' ident ')'
///
/// Partials are written dt, d0..dn; boosts L1..Ln. Throws ParseError for
/// malformed input and std::out_of_range for x^a with a > dim.
Expr parse_expression(std::string_view text, int dim);

}  // namespace hypercalc
