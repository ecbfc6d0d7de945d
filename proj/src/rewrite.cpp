#include "conch/rewrite.hpp"

#include <algorithm>

#include "conch/primitives.hpp"
#include "conch/reader.hpp"
#include "conch/value.hpp"

namespace conch {

bool match_into(const SExpr& pattern, const SExpr& expr, Bindings& bindings) {
  if (is_pattern_variable(pattern)) {
    auto [it, inserted] = bindings.try_emplace(*pattern.symbol_name(), expr);
    return inserted || it->second == expr;
  }
  const auto* pl = pattern.as_list();
  if (!pl) return pattern == expr;
  const auto* el = expr.as_list();
  if (!el || el->size() != pl->size()) return false;
  for (std::size_t i = 0; i < pl->size(); ++i)
    if (!match_into((*pl)[i], (*el)[i], bindings)) return false;
  return true;
}

std::optional<Bindings> match(const SExpr& pattern, const SExpr& expr) {
  Bindings b;
  if (!match_into(pattern, expr, b)) return std::nullopt;
  return b;
}

SExpr substitute(const SExpr& tmpl, const Bindings& bindings) {
  if (is_pattern_variable(tmpl)) {
    auto it = bindings.find(*tmpl.symbol_name());
    if (it == bindings.end()) throw EvalError("unbound pattern variable " + *tmpl.symbol_name(), tmpl.location());
    return it->second;
  }
  const auto* items = tmpl.as_list();
  if (!items) return tmpl;
  SExpr::List out;
  out.reserve(items->size());
  for (const auto& item : *items) out.push_back(substitute(item, bindings));
  return SExpr::list(std::move(out), tmpl.location());
}

std::set<std::string> pattern_variables(const SExpr& pattern) {
  std::set<std::string> out;
  auto walk = [&](auto& self, const SExpr& e) -> void {
    if (is_pattern_variable(e)) out.insert(*e.symbol_name());
    if (const auto* items = e.as_list())
      for (const auto& item : *items) self(self, item);
  };
  walk(walk, pattern);
  return out;
}

namespace {

bool is_literal(const SExpr& e) { return e.is_integer() || e.is_real() || std::holds_alternative<bool>(e.data()); }

}  // namespace

SExpr constant_fold(const SExpr& expr) {
  const auto* items = expr.as_list();
  if (!items || items->empty()) return expr;
  if (items->front().is_symbol("quote")) return expr;
  SExpr::List folded;
  folded.reserve(items->size());
  for (const auto& item : *items) folded.push_back(constant_fold(item));
  const auto* head = folded.front().symbol_name();
  const bool all_literal = std::all_of(folded.begin() + 1, folded.end(), is_literal);
  if (head && is_foldable_primitive(*head) && all_literal) {
    std::vector<Value> args;
    for (auto it = folded.begin() + 1; it != folded.end(); ++it) args.push_back(quote(*it));
    try {
      Rng unused(0);
      auto result = to_datum(apply_primitive(*find_primitive(*head), args, unused));
      if (result) return SExpr(result->data(), expr.location());
    } catch (const EvalError&) {
      // ill-typed ground term stays as written
    }
  }
  return SExpr::list(std::move(folded), expr.location());
}

bool is_ground(const SExpr& expr) {
  if (expr.is_symbol()) return false;
  const auto* items = expr.as_list();
  if (!items) return true;
  if (items->empty()) return false;
  const auto* head = items->front().symbol_name();
  if (!head || !is_foldable_primitive(*head)) return false;
  return std::all_of(items->begin() + 1, items->end(), is_ground);
}

bool occurs(const SExpr& expr, std::string_view symbol) {
  if (expr.is_symbol(symbol)) return true;
  if (const auto* items = expr.as_list())
    return std::any_of(items->begin(), items->end(), [&](const SExpr& e) { return occurs(e, symbol); });
  return false;
}

SExpr RewriteRule::to_form() const {
  return SExpr::list({SExpr::symbol(kind == Kind::Equivalence ? "equivalence" : "implication"),
                      SExpr::symbol(name), lhs, rhs});
}

RewriteRule RuleSet::parse_rule(const SExpr& form) const {
  const auto* items = form.as_list();
  const auto* head = form.head_symbol();
  if (!head || (*head != "equivalence" && *head != "implication"))
    throw EvalError("expected an (equivalence ...) or (implication ...) form, got " + print(form), form.location());
  RewriteRule rule;
  rule.kind = *head == "equivalence" ? RewriteRule::Kind::Equivalence : RewriteRule::Kind::Implication;
  rule.where = form.location();
  if (items->size() == 4 && (*items)[1].is_symbol() && !is_pattern_variable((*items)[1])) {
    rule.name = *(*items)[1].symbol_name();
    rule.lhs = (*items)[2];
    rule.rhs = (*items)[3];
  } else if (items->size() == 3) {
    rule.name = "rule-" + std::to_string(rules_.size() + 1);
    rule.lhs = (*items)[1];
    rule.rhs = (*items)[2];
  } else {
    throw EvalError(*head + " expects an optional name, a left side and a right side", form.location());
  }
  return rule;
}

void RuleSet::add(RewriteRule rule) {
  auto check = [&](const SExpr& from, const SExpr& to, const char* side) {
    auto bound = pattern_variables(from);
    for (const auto& v : pattern_variables(to))
      if (!bound.contains(v))
        throw EvalError("rule " + rule.name + ": variable " + v + " is free in the " + side + " side", rule.where);
  };
  check(rule.lhs, rule.rhs, "right");
  if (rule.kind == RewriteRule::Kind::Equivalence) check(rule.rhs, rule.lhs, "left");
  for (const auto& r : rules_)
    if (r.name == rule.name) throw EvalError("duplicate rule name " + rule.name, rule.where);
  rules_.push_back(std::move(rule));
}

void RuleSet::load(std::string_view text) {
  for (const auto& form : parse(text)) add(parse_rule(form));
}

namespace {

using Path = std::vector<std::size_t>;

void positions(const SExpr& e, Path& path, std::vector<Path>& out) {
  out.push_back(path);
  if (const auto* items = e.as_list()) {
    if (!items->empty() && items->front().is_symbol("quote")) return;
    for (std::size_t i = 0; i < items->size(); ++i) {
      path.push_back(i);
      positions((*items)[i], path, out);
      path.pop_back();
    }
  }
}

const SExpr& at(const SExpr& e, const Path& path, std::size_t from = 0) {
  if (from == path.size()) return e;
  return at((*e.as_list())[path[from]], path, from + 1);
}

SExpr replace_at(const SExpr& e, const Path& path, const SExpr& replacement, std::size_t from = 0) {
  if (from == path.size()) return replacement;
  SExpr::List items = *e.as_list();
  items[path[from]] = replace_at(items[path[from]], path, replacement, from + 1);
  return SExpr::list(std::move(items), e.location());
}

// Minimum depth of `target` below the root; nullopt when absent.
std::optional<int> target_depth(const SExpr& e, std::string_view target, int depth = 0) {
  if (e.is_symbol(target)) return depth;
  std::optional<int> best;
  if (const auto* items = e.as_list())
    for (const auto& item : *items)
      if (auto d = target_depth(item, target, depth + 1); d && (!best || *d < *best)) best = d;
  return best;
}

// Root `=` with the target on exactly one side and a ground other side.
bool other_side_ground(const SExpr& e, std::string_view target) {
  const auto* items = e.as_list();
  if (!items || items->size() != 3 || !(*items)[0].is_symbol("=")) return false;
  const bool left = occurs((*items)[1], target), right = occurs((*items)[2], target);
  if (left == right) return false;
  return is_ground(left ? (*items)[2] : (*items)[1]);
}

bool progresses(const SExpr& before, const SExpr& after, std::string_view target) {
  auto db = target_depth(before, target);
  auto da = target_depth(after, target);
  if (!da) return false;
  if (db && *da < *db) return true;
  // Grounding the other side counts only if the target did not sink; this
  // rules out cycles between the two directions of one equivalence.
  if (db && *da > *db) return false;
  return other_side_ground(after, target) && !other_side_ground(before, target);
}

// `(= target ground)`, or `(= ground target)` normalized to that shape.
std::optional<SExpr> solved_form(const SExpr& e, std::string_view target) {
  const auto* items = e.as_list();
  if (!items || items->size() != 3 || !(*items)[0].is_symbol("=")) return std::nullopt;
  if ((*items)[1].is_symbol(target) && is_ground((*items)[2])) return e;
  if ((*items)[2].is_symbol(target) && is_ground((*items)[1]))
    return SExpr::list({(*items)[0], (*items)[2], (*items)[1]}, e.location());
  return std::nullopt;
}

std::optional<SExpr> rewrite_step(const SExpr& current, const std::string& target, const RuleSet& rules) {
  std::vector<Path> order;
  Path scratch;
  positions(current, scratch, order);
  for (bool backward : {false, true}) {
    for (const auto& path : order) {
      const SExpr& sub = at(current, path);
      for (const auto& rule : rules.rules()) {
        if (rule.kind != RewriteRule::Kind::Equivalence) continue;
        const SExpr& from = backward ? rule.rhs : rule.lhs;
        const SExpr& to = backward ? rule.lhs : rule.rhs;
        auto bindings = match(from, sub);
        if (!bindings) continue;
        SExpr candidate = replace_at(current, path, substitute(to, *bindings));
        if (progresses(current, candidate, target)) return candidate;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve_condition(const SExpr& condition, const std::string& target, const RuleSet& rules,
                            const SolveOptions& options) {
  SolveResult result;
  result.chain.push_back(condition);
  SExpr current = constant_fold(condition);
  if (!(current == condition)) result.chain.push_back(current);

  while (true) {
    if (auto solved = solved_form(current, target)) {
      if (!(*solved == current)) result.chain.push_back(*solved);
      result.condition = *solved;
      result.solved = true;
      return result;
    }
    if (result.steps >= options.step_limit) break;
    auto next = rewrite_step(current, target, rules);
    if (!next) break;
    ++result.steps;
    result.chain.push_back(*next);
    current = constant_fold(*next);
    if (!(current == *next)) result.chain.push_back(current);
  }
  result.condition = condition;
  return result;
}

namespace {

// `(random-integer N)` with N folding to an integer literal.
std::optional<Integer> finite_support_bound(const SExpr& prior) {
  const auto* items = prior.as_list();
  if (!items || items->size() != 2 || !(*items)[0].is_symbol("random-integer")) return std::nullopt;
  SExpr n = constant_fold((*items)[1]);
  if (const auto* i = std::get_if<Integer>(&n.data())) return *i;
  return std::nullopt;
}

}  // namespace

OptimizedQuery optimize_query(const QuerySpec& spec, const RuleSet& rules, const ConceptStore& /*store*/,
                              const SolveOptions& options) {
  OptimizedQuery out{spec, {}};
  if (spec.condition == SExpr::boolean(true)) return out;
  for (std::size_t i = 0; i < spec.definitions.size(); ++i) {
    const auto& def = spec.definitions[i];
    const auto* items = def.as_list();
    if (!items || items->size() != 3 || !(*items)[0].is_symbol("define") || !(*items)[1].is_symbol()) continue;
    const std::string& var = *(*items)[1].symbol_name();
    if (!occurs(spec.condition, var)) continue;
    // Only finite-support priors can be checked exactly; continuous and
    // concept-valued priors are left to blind sampling.
    auto bound = finite_support_bound((*items)[2]);
    if (!bound) continue;
    SolveResult solved = solve_condition(spec.condition, var, rules, options);
    if (!solved.solved) continue;
    const SExpr& value = (*solved.condition.as_list())[2];
    const auto* forced = std::get_if<Integer>(&value.data());
    if (!forced) continue;
    if (*forced < 0 || *forced >= *bound)
      throw ZeroProbabilityError("condition " + print(spec.condition) + " forces " + var + " = " + forced->str() +
                                     ", outside the support of " + print((*items)[2]),
                                 spec.condition.location());
    SExpr rewritten = SExpr::list({(*items)[0], (*items)[1], value}, def.location());
    out.spec.definitions[i] = rewritten;
    out.spec.condition = SExpr::boolean(true);
    out.report.fired = true;
    out.report.variable = var;
    out.report.chain = std::move(solved.chain);
    out.report.original_definition = def;
    out.report.rewritten_definition = rewritten;
    return out;
  }
  return out;
}

}  // namespace conch
