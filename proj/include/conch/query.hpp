#pragma once

#include <vector>

#include "conch/sexpr.hpp"

namespace conch {

/// Body of a `(rejection-query def... query condition)` form.
struct QuerySpec {
  std::vector<SExpr> definitions;
  SExpr query;
  SExpr condition;

  /// The last two body forms are the query and the condition; everything
  /// before them is a definition. Throws EvalError on malformed input.
  static QuerySpec from_form(const SExpr& form);
  SExpr to_form() const;
};

}  // namespace conch
