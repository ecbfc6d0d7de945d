#include "conch/interpreter.hpp"

#include <algorithm>
#include <set>

#include "conch/concept_sampler.hpp"
#include "conch/inference.hpp"
#include "conch/primitives.hpp"
#include "conch/reader.hpp"

namespace conch {

namespace {

constexpr std::string_view kSpecialForms[] = {
    "quote",   "if",     "define",         "lambda",      "let",         "begin",       "and", "or",
    "concept", "is-a",   "define-context", "set-context", "equivalence", "implication", "sample",
    "rejection-query",
};

[[noreturn]] void fail(const std::string& message, const SExpr& where) { throw EvalError(message, where.location()); }

void expect_size(const SExpr::List& items, std::size_t lo, std::size_t hi, const SExpr& form, const char* shape) {
  if (items.size() < lo || items.size() > hi) fail(std::string("malformed ") + shape, form);
}

void require_unfrozen(const EvalContext& ctx, const SExpr& form) {
  if (ctx.knowledge_frozen)
    fail("knowledge forms are only allowed at session level, not inside rejection-query or sampling", form);
}

const std::string& symbol_arg(const SExpr& e, const char* what) {
  const auto* name = e.symbol_name();
  if (!name) fail(std::string(what) + " must be a symbol, got " + print(e), e);
  return *name;
}

bool truth(const Value& v, const SExpr& where, const char* who) {
  const auto* b = v.get_if<bool>();
  if (!b) fail(std::string(who) + ": expected a boolean, got " + show(v), where);
  return *b;
}

}  // namespace

Interpreter::Interpreter() : global_(Env::make()) { install_builtins(*global_); }

bool Interpreter::is_special_form(std::string_view name) {
  return std::find(std::begin(kSpecialForms), std::end(kSpecialForms), name) != std::end(kSpecialForms);
}

Value Interpreter::eval(const SExpr& expr, const EnvPtr& env, Rng& rng) {
  EvalContext ctx{&rng, false, nullptr};
  return eval(expr, env, ctx);
}

Value Interpreter::eval_program(std::string_view text, Rng& rng) {
  Value last;
  for (const auto& form : parse(text)) last = eval(form, global_, rng);
  return last;
}

Value Interpreter::eval(const SExpr& expr, const EnvPtr& env, EvalContext& ctx) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Symbol>) {
          if (const Value* v = env->lookup(x.name)) return *v;
          if (auto id = store_.find(x.name)) return Value(store_.ref(*id));
          fail("unbound symbol '" + x.name + "'", expr);
        } else if constexpr (std::is_same_v<T, SExpr::List>) {
          return eval_list(expr, x, env, ctx);
        } else {
          return Value(x);
        }
      },
      expr.data());
}

Value Interpreter::eval_list(const SExpr& expr, const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  if (items.empty()) fail("cannot evaluate an empty application ()", expr);
  if (const auto* head = items.front().symbol_name(); head && is_special_form(*head)) {
    const std::string& h = *head;
    if (h == "quote") {
      expect_size(items, 2, 2, expr, "quote");
      return quote(items[1]);
    }
    if (h == "if") return eval_if(items, env, ctx);
    if (h == "define") return eval_define(items, env, ctx);
    if (h == "lambda") {
      expect_size(items, 3, SIZE_MAX, expr, "lambda: (lambda (params...) body...)");
      return eval_lambda(items, env, "");
    }
    if (h == "let") return eval_let(items, env, ctx);
    if (h == "begin") return eval_body(std::span(items).subspan(1), env, ctx);
    if (h == "and") return eval_logic(items, env, ctx, true);
    if (h == "or") return eval_logic(items, env, ctx, false);
    if (h == "concept") return eval_concept(items, ctx);
    if (h == "is-a") return eval_isa(items, env, ctx);
    if (h == "define-context") return eval_define_context(items, env, ctx);
    if (h == "set-context") return eval_set_context(items, ctx);
    if (h == "equivalence" || h == "implication") return eval_rule(expr, ctx);
    if (h == "sample") return eval_sample(items, env, ctx);
    if (h == "rejection-query") return eval_query(expr, env, ctx);
  }

  Value fn = eval(items.front(), env, ctx);
  std::vector<Value> args;
  args.reserve(items.size() - 1);
  for (std::size_t i = 1; i < items.size(); ++i) args.push_back(eval(items[i], env, ctx));
  try {
    return apply(fn, args, ctx);
  } catch (Error& e) {
    e.locate(expr.location());
    throw;
  }
}

Value Interpreter::apply(const Value& fn, std::span<const Value> args, EvalContext& ctx) {
  if (const auto* prim = fn.get_if<std::shared_ptr<const Primitive>>()) return apply_primitive(**prim, args, *ctx.rng);
  const auto* closure = fn.get_if<std::shared_ptr<const Closure>>();
  if (!closure) throw EvalError("cannot apply a non-function: " + show(fn));
  const Closure& c = **closure;
  if (args.size() != c.params.size()) {
    const std::string who = c.name.empty() ? "lambda" : c.name;
    throw EvalError(who + ": arity mismatch, expected " + std::to_string(c.params.size()) + " argument(s), got " +
                    std::to_string(args.size()));
  }
  EnvPtr frame = Env::make(c.env);
  for (std::size_t i = 0; i < args.size(); ++i) frame->define(c.params[i], args[i]);
  return eval_body(c.body, frame, ctx);
}

Value Interpreter::eval_body(std::span<const SExpr> body, const EnvPtr& env, EvalContext& ctx) {
  Value last;
  for (const auto& form : body) last = eval(form, env, ctx);
  return last;
}

Value Interpreter::eval_if(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  if (items.size() != 3 && items.size() != 4) fail("malformed if: (if test then [else])", items.front());
  if (truth(eval(items[1], env, ctx), items[1], "if")) return eval(items[2], env, ctx);
  return items.size() == 4 ? eval(items[3], env, ctx) : Value();
}

Value Interpreter::eval_logic(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx, bool is_and) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    const bool v = truth(eval(items[i], env, ctx), items[i], is_and ? "and" : "or");
    if (v != is_and) return Value(v);
  }
  return Value(is_and);
}

Value Interpreter::eval_define(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  const SExpr& form_head = items.front();
  if (items.size() < 3) fail("malformed define: (define name expr) or (define (name params...) body...)", form_head);
  const SExpr& target = items[1];
  if (const auto* sig = target.as_list()) {
    if (sig->empty()) fail("define: empty signature", target);
    const std::string& name = symbol_arg(sig->front(), "define: function name");
    SExpr::List lambda{SExpr::symbol("lambda"), SExpr::list(SExpr::List(sig->begin() + 1, sig->end()))};
    lambda.insert(lambda.end(), items.begin() + 2, items.end());
    Value fn = eval_lambda(lambda, env, name);
    try {
      env->define(name, std::move(fn));
    } catch (Error& e) {
      e.locate(target.location());
      throw;
    }
    return Value();
  }
  const std::string& name = symbol_arg(target, "define: name");
  if (items.size() != 3) fail("malformed define: (define name expr)", form_head);
  Value v = eval(items[2], env, ctx);
  if (auto* c = v.get_if<std::shared_ptr<const Closure>>(); c && (*c)->name.empty()) {
    auto named = std::make_shared<Closure>(**c);
    named->name = name;
    v = Value(std::shared_ptr<const Closure>(std::move(named)));
  }
  try {
    env->define(name, std::move(v));
  } catch (Error& e) {
    e.locate(target.location());
    throw;
  }
  return Value();
}

Value Interpreter::eval_lambda(const SExpr::List& items, const EnvPtr& env, std::string name) {
  const auto* params = items[1].as_list();
  if (!params) fail("lambda: parameter list expected", items[1]);
  auto closure = std::make_shared<Closure>();
  for (const auto& p : *params) {
    const std::string& pname = symbol_arg(p, "lambda parameter");
    if (std::find(closure->params.begin(), closure->params.end(), pname) != closure->params.end())
      fail("lambda: duplicate parameter '" + pname + "'", p);
    closure->params.push_back(pname);
  }
  closure->body.assign(items.begin() + 2, items.end());
  closure->env = env;
  closure->name = std::move(name);
  return Value(std::shared_ptr<const Closure>(std::move(closure)));
}

Value Interpreter::eval_let(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  if (items.size() < 3 || !items[1].as_list()) fail("malformed let: (let ((name expr)...) body...)", items.front());
  EnvPtr frame = Env::make(env);
  for (const auto& binding : *items[1].as_list()) {
    const auto* pair = binding.as_list();
    if (!pair || pair->size() != 2) fail("let: binding must be (name expr)", binding);
    const std::string& name = symbol_arg((*pair)[0], "let: binding name");
    Value v = eval((*pair)[1], env, ctx);
    try {
      frame->define(name, std::move(v));
    } catch (Error& e) {
      e.locate(binding.location());
      throw;
    }
  }
  return eval_body(std::span(items).subspan(2), frame, ctx);
}

// --- knowledge forms -------------------------------------------------------

Value Interpreter::eval_concept(const SExpr::List& items, EvalContext& ctx) {
  require_unfrozen(ctx, items.front());
  if (items.size() < 2) fail("malformed concept: (concept name...)", items.front());
  for (std::size_t i = 1; i < items.size(); ++i) {
    const std::string& name = symbol_arg(items[i], "concept name");
    try {
      store_.declare_concept(name);
    } catch (Error& e) {
      e.locate(items[i].location());
      throw;
    }
  }
  return Value();
}

LinkSource Interpreter::link_source(const SExpr& source) const {
  if (const auto* name = source.symbol_name())
    if (auto id = store_.find(*name)) return *id;
  check_source_names(source);
  return source;
}

void Interpreter::check_source_names(const SExpr& source) const {
  // Names bound inside the template by lambda or let are local.
  std::set<std::string> local;
  auto binders = [&](auto& self, const SExpr& e) -> void {
    const auto* items = e.as_list();
    if (!items || items->empty()) return;
    if (items->front().is_symbol("lambda") && items->size() > 1)
      if (const auto* params = (*items)[1].as_list())
        for (const auto& p : *params)
          if (const auto* n = p.symbol_name()) local.insert(*n);
    if (items->front().is_symbol("let") && items->size() > 1)
      if (const auto* bindings = (*items)[1].as_list())
        for (const auto& b : *bindings)
          if (const auto* pair = b.as_list(); pair && !pair->empty())
            if (const auto* n = pair->front().symbol_name()) local.insert(*n);
    for (const auto& item : *items) self(self, item);
  };
  binders(binders, source);

  auto walk = [&](auto& self, const SExpr& e) -> void {
    if (const auto* name = e.symbol_name()) {
      if (store_.find(*name) || global_->lookup(*name) || is_special_form(*name) || local.contains(*name)) return;
      fail("is-a source mentions '" + *name + "', which is neither a declared concept nor a global binding", e);
    }
    const auto* items = e.as_list();
    if (!items || (!items->empty() && items->front().is_symbol("quote"))) return;
    for (const auto& item : *items) self(self, item);
  };
  walk(walk, source);
}

double Interpreter::weight_arg(const SExpr& expr, const EnvPtr& env, EvalContext& ctx) {
  Value w = eval(expr, env, ctx);
  if (!w.is_number()) fail("is-a weight must be a number, got " + show(w), expr);
  return to_double(w);
}

Value Interpreter::eval_isa(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  require_unfrozen(ctx, items.front());
  if (items.size() != 3 && items.size() != 4) fail("malformed is-a: (is-a source concept [weight])", items.front());
  const std::string& target_name = symbol_arg(items[2], "is-a target");
  try {
    ConceptId target = store_.id_of(target_name);
    LinkSource source = link_source(items[1]);
    const double weight = items.size() == 4 ? weight_arg(items[3], env, ctx) : 1.0;
    store_.add_isa(std::move(source), target, weight);
  } catch (Error& e) {
    e.locate(items[1].location());
    throw;
  }
  return Value();
}

Value Interpreter::eval_define_context(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  require_unfrozen(ctx, items.front());
  if (items.size() < 2) fail("malformed define-context: (define-context name (source concept weight)...)", items.front());
  const std::string& name = symbol_arg(items[1], "context name");
  std::vector<std::pair<LinkId, double>> overrides;
  for (std::size_t i = 2; i < items.size(); ++i) {
    const auto* entry = items[i].as_list();
    if (!entry || entry->size() != 3) fail("define-context: override must be (source concept weight)", items[i]);
    try {
      ConceptId target = store_.id_of(symbol_arg((*entry)[1], "define-context target"));
      LinkSource source = link_source((*entry)[0]);
      auto link = store_.find_link(source, target);
      if (!link) fail("define-context: no is-a link " + print((*entry)[0]) + " -> " + store_.name(target), items[i]);
      overrides.emplace_back(*link, weight_arg((*entry)[2], env, ctx));
    } catch (Error& e) {
      e.locate(items[i].location());
      throw;
    }
  }
  try {
    store_.define_context(name, overrides);
  } catch (Error& e) {
    e.locate(items[1].location());
    throw;
  }
  return Value();
}

Value Interpreter::eval_set_context(const SExpr::List& items, EvalContext& ctx) {
  require_unfrozen(ctx, items.front());
  expect_size(items, 2, 2, items.front(), "set-context: (set-context name)");
  try {
    store_.set_context(symbol_arg(items[1], "context name"));
  } catch (Error& e) {
    e.locate(items[1].location());
    throw;
  }
  return Value();
}

Value Interpreter::eval_rule(const SExpr& form, EvalContext& ctx) {
  require_unfrozen(ctx, form);
  rules_.add(rules_.parse_rule(form));
  return Value();
}

Value Interpreter::eval_sample(const SExpr::List& items, const EnvPtr& env, EvalContext& ctx) {
  expect_size(items, 2, 2, items.front(), "sample: (sample concept)");
  const SExpr& arg = items[1];
  std::optional<ConceptId> id;
  if (const auto* name = arg.symbol_name()) {
    id = store_.find(*name);
    if (!id) {
      const Value* bound = env->lookup(*name);
      if (!bound) fail("sample: unknown concept '" + *name + "'", arg);
      const auto* ref = bound->get_if<ConceptRef>();
      if (!ref) fail("sample: '" + *name + "' is not a concept", arg);
      id = ref->id;
    }
  } else {
    Value v = eval(arg, env, ctx);
    const auto* ref = v.get_if<ConceptRef>();
    if (!ref) fail("sample: expected a concept, got " + show(v), arg);
    id = ref->id;
  }
  try {
    if (ctx.budget) return sample_concept(*this, *id, *ctx.rng, *ctx.budget);
    SampleBudget budget = fresh_budget();
    return sample_concept(*this, *id, *ctx.rng, budget);
  } catch (Error& e) {
    e.locate(arg.location());
    throw;
  }
}

Value Interpreter::eval_query(const SExpr& form, const EnvPtr& env, EvalContext& ctx) {
  QuerySpec spec = QuerySpec::from_form(form);
  try {
    if (options_.rewrite) spec = optimize_query(spec, rules_, store_).spec;
    return rejection_query(*this, spec, env, *ctx.rng, options_.max_attempts).value;
  } catch (Error& e) {
    e.locate(form.location());
    throw;
  }
}

}  // namespace conch
