#pragma once

#include <vector>

#include "conch/interpreter.hpp"

namespace conch {

/// Draws one instance of concept `c`: picks an incoming is-a link with
/// probability proportional to its effective weight, then recurses into a
/// concept source or instantiates an expression source.
///
/// Throws EvalError when `c` has no links and BudgetExhausted when the draw
/// exceeds `budget`.
Value sample_concept(Interpreter& interp, ConceptId c, Rng& rng, SampleBudget& budget);

/// Replaces every concept-naming symbol in `expr` by an independent draw of
/// that concept, then evaluates the result in a child of the global
/// environment. With two or more occurrences the draw order is a uniform
/// random permutation.
Value instantiate_expression(Interpreter& interp, const SExpr& expr, Rng& rng, SampleBudget& budget);

/// Paths (child indices from the root) of concept-naming symbols in `expr`,
/// in preorder, skipping quoted data.
std::vector<std::vector<std::size_t>> concept_occurrences(const ConceptStore& store, const SExpr& expr);

}  // namespace conch
