#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "conch/concept_store.hpp"
#include "conch/rewrite.hpp"
#include "conch/rng.hpp"
#include "conch/value.hpp"

namespace conch {

/// Limits for one `(sample c)` draw. `depth` counts nested concept
/// expansions on the current path; `nodes` counts all expansions.
struct SampleBudget {
  int max_depth = 64;
  std::size_t max_nodes = 10'000;
  int depth = 0;
  std::size_t nodes = 0;
};

/// Per-evaluation state threaded through `eval`.
struct EvalContext {
  Rng* rng = nullptr;
  /// Set inside rejection-query bodies and concept sampling, where the
  /// knowledge forms (concept, is-a, ...) are rejected.
  bool knowledge_frozen = false;
  /// Budget of the enclosing `(sample c)`, if any.
  SampleBudget* budget = nullptr;
};

struct InterpreterOptions {
  std::uint64_t max_attempts = 1'000'000;
  bool rewrite = true;
  int sample_max_depth = 64;
  std::size_t sample_max_nodes = 10'000;
};

/// Evaluator for the language plus the session-level knowledge it consults:
/// the concept store and the rewrite rules.
///
/// Knowledge forms mutate the interpreter and must run on one thread.
/// Once knowledge is frozen (rejection-query bodies, concept sampling)
/// evaluation only reads shared state, so concurrent evaluations with
/// distinct Env and Rng instances are safe.
class Interpreter {
 public:
  Interpreter();

  const EnvPtr& global() const { return global_; }
  ConceptStore& store() { return store_; }
  const ConceptStore& store() const { return store_; }
  RuleSet& rules() { return rules_; }
  const RuleSet& rules() const { return rules_; }
  InterpreterOptions& options() { return options_; }
  const InterpreterOptions& options() const { return options_; }

  Value eval(const SExpr& expr, const EnvPtr& env, Rng& rng);
  Value eval(const SExpr& expr, const EnvPtr& env, EvalContext& ctx);
  /// Evaluates each form in the global environment, returning the last value.
  Value eval_program(std::string_view text, Rng& rng);

  Value apply(const Value& fn, std::span<const Value> args, EvalContext& ctx);

  SampleBudget fresh_budget() const { return {options_.sample_max_depth, options_.sample_max_nodes}; }

  /// True for names handled as special forms.
  static bool is_special_form(std::string_view name);

 private:
  Value eval_list(const SExpr& expr, const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_body(std::span<const SExpr> body, const EnvPtr& env, EvalContext& ctx);
  Value eval_define(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_lambda(const SExpr::List& items, const EnvPtr& env, std::string name);
  Value eval_let(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_if(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_logic(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx, bool is_and);
  Value eval_concept(const SExpr::List& items, EvalContext& ctx);
  Value eval_isa(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_define_context(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_set_context(const SExpr::List& items, EvalContext& ctx);
  Value eval_rule(const SExpr& form, EvalContext& ctx);
  Value eval_sample(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx);
  Value eval_query(const SExpr& form, const EnvPtr& env, EvalContext& ctx);

  LinkSource link_source(const SExpr& source) const;
  void check_source_names(const SExpr& source) const;
  double weight_arg(const SExpr& expr, const EnvPtr& env, EvalContext& ctx);

  EnvPtr global_;
  ConceptStore store_;
  RuleSet rules_;
  InterpreterOptions options_;
};

}  // namespace conch
