#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "conch/concept_store.hpp"
#include "conch/query.hpp"
#include "conch/sexpr.hpp"

namespace conch {

/// Pattern variable name (including the `$`) to bound subexpression.
using Bindings = std::map<std::string, SExpr>;

/// First-order syntactic matching. Lists match element-wise, atoms by
/// equality, `$`-variables bind; a repeated variable must bind structurally
/// equal subexpressions.
std::optional<Bindings> match(const SExpr& pattern, const SExpr& expr);
/// Extends `bindings` in place; on failure `bindings` may hold partial work.
bool match_into(const SExpr& pattern, const SExpr& expr, Bindings& bindings);

/// Simultaneous substitution. Throws EvalError on an unbound variable.
SExpr substitute(const SExpr& tmpl, const Bindings& bindings);

std::set<std::string> pattern_variables(const SExpr& pattern);

/// Bottom-up evaluation of foldable primitive applications whose operands
/// are all numeric or boolean literals. Ill-typed ground terms are left as
/// they are; quoted data is never touched.
SExpr constant_fold(const SExpr& expr);

/// No symbols other than foldable primitive names in operator position.
bool is_ground(const SExpr& expr);

/// Does `symbol` occur in `expr`?
bool occurs(const SExpr& expr, std::string_view symbol);

struct RewriteRule {
  enum class Kind { Equivalence, Implication };

  Kind kind = Kind::Equivalence;
  SExpr lhs;
  SExpr rhs;
  std::string name;
  Location where;

  SExpr to_form() const;
};

/// Ordered rule collection. File order is the application order.
class RuleSet {
 public:
  /// Validates variable scoping and appends. Throws EvalError naming the rule.
  void add(RewriteRule rule);
  /// Parses one `(equivalence [name] lhs rhs)` or `(implication [name] lhs rhs)` form.
  RewriteRule parse_rule(const SExpr& form) const;
  /// Loads every form of a rule file; any other form is an error.
  void load(std::string_view text);

  const std::vector<RewriteRule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<RewriteRule> rules_;
};

struct SolveOptions {
  int step_limit = 100;
};

struct SolveResult {
  SExpr condition;  // final form; the input itself when nothing applied
  bool solved = false;
  /// Input, then every rewrite result and, when it differs, its folded form.
  std::vector<SExpr> chain;
  int steps = 0;
};

/// Rewrites `condition` toward `(= target ground)`.
///
/// Each step scans positions leftmost-outermost and rules in order, taking
/// the first rewrite that makes progress: the target moves strictly closer
/// to the root, or the side of the root `=` without the target becomes
/// ground. Equivalences are tried right-to-left only after no left-to-right
/// rewrite progressed. Implication rules are never used here because they
/// may weaken the condition. The result is folded after every rewrite.
SolveResult solve_condition(const SExpr& condition, const std::string& target, const RuleSet& rules,
                            const SolveOptions& options = {});

struct OptimizationReport {
  bool fired = false;
  std::string variable;
  std::vector<SExpr> chain;
  std::optional<SExpr> original_definition;
  std::optional<SExpr> rewritten_definition;
};

struct OptimizedQuery {
  QuerySpec spec;
  OptimizationReport report;
};

/// Replaces a finite-support prior by its forced value when the condition
/// solves to a point mass inside the prior's support. Throws
/// ZeroProbabilityError when the forced value lies outside the support.
/// Any other outcome returns the query unchanged.
OptimizedQuery optimize_query(const QuerySpec& spec, const RuleSet& rules, const ConceptStore& store,
                              const SolveOptions& options = {});

}  // namespace conch
