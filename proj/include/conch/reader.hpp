#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "conch/sexpr.hpp"

namespace conch {

struct Token {
  enum class Kind { LParen, RParen, Quote, Symbol, Integer, Real, Boolean, String };

  Kind kind;
  std::string text;  // lexeme as written (strings keep their quotes)
  Location where;
};

/// Splits program text into tokens. `;` comments and whitespace are dropped.
/// Throws SyntaxError on an unterminated string or a bad `#` literal.
std::vector<Token> tokenize(std::string_view text);

/// Reads every top-level form. `'x` reads as `(quote x)`.
std::vector<SExpr> parse(std::string_view text);

/// Reads exactly one form.
SExpr parse_one(std::string_view text);

/// Canonical text: single spaces, shortest round-trip reals that always
/// carry a `.` or exponent, integers in plain decimal.
std::string print(const SExpr& expr);

/// Canonical spelling of a real number, shared with value printing.
std::string format_real(double value);
/// Double-quoted string literal with `\"`, `\\`, `\n`, `\t` escapes.
std::string quote_text(std::string_view value);

}  // namespace conch
