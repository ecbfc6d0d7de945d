#include "conch/concept_sampler.hpp"

#include <numeric>

namespace conch {

namespace {

using Path = std::vector<std::size_t>;

void collect(const ConceptStore& store, const SExpr& e, Path& path, std::vector<Path>& out) {
  if (const auto* name = e.symbol_name()) {
    if (store.find(*name)) out.push_back(path);
    return;
  }
  const auto* items = e.as_list();
  if (!items || (!items->empty() && items->front().is_symbol("quote"))) return;
  for (std::size_t i = 0; i < items->size(); ++i) {
    path.push_back(i);
    collect(store, (*items)[i], path, out);
    path.pop_back();
  }
}

SExpr replace_at(const SExpr& e, const Path& path, const SExpr& replacement, std::size_t from = 0) {
  if (from == path.size()) return replacement;
  SExpr::List items = *e.as_list();
  items[path[from]] = replace_at(items[path[from]], path, replacement, from + 1);
  return SExpr::list(std::move(items), e.location());
}

// Holds one level of recursion depth for the lifetime of a concept expansion.
class DepthGuard {
 public:
  explicit DepthGuard(SampleBudget& b) : budget_(b) { ++budget_.depth; }
  ~DepthGuard() { --budget_.depth; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  SampleBudget& budget_;
};

// Never a reader symbol: the name contains a space.
std::string hidden_name(std::size_t i) { return "concept draw " + std::to_string(i); }

}  // namespace

std::vector<Path> concept_occurrences(const ConceptStore& store, const SExpr& expr) {
  std::vector<Path> out;
  Path scratch;
  collect(store, expr, scratch, out);
  return out;
}

Value sample_concept(Interpreter& interp, ConceptId c, Rng& rng, SampleBudget& budget) {
  const ConceptStore& store = interp.store();
  if (budget.depth >= budget.max_depth || budget.nodes >= budget.max_nodes)
    throw BudgetExhausted("sampling did not terminate within budget (depth " + std::to_string(budget.max_depth) +
                          ", nodes " + std::to_string(budget.max_nodes) + ") while expanding '" + store.name(c) +
                          "'");
  ++budget.nodes;
  DepthGuard guard(budget);

  const auto links = store.instances_of(c);
  if (links.empty()) throw EvalError("no generative model for concept " + store.name(c));
  double total = 0;
  for (const auto& l : links) total += l.weight;
  const double u = rng.uniform01() * total;
  const IsALink* chosen = links.back().link;
  double cumulative = 0;
  for (const auto& l : links) {
    cumulative += l.weight;
    if (u < cumulative) {
      chosen = l.link;
      break;
    }
  }
  if (const auto* child = std::get_if<ConceptId>(&chosen->source)) return sample_concept(interp, *child, rng, budget);
  return instantiate_expression(interp, std::get<SExpr>(chosen->source), rng, budget);
}

Value instantiate_expression(Interpreter& interp, const SExpr& expr, Rng& rng, SampleBudget& budget) {
  const ConceptStore& store = interp.store();
  const auto occurrences = concept_occurrences(store, expr);

  std::vector<std::size_t> order(occurrences.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(std::uint64_t{i})]);

  EnvPtr env = Env::make(interp.global());
  std::vector<Value> draws(occurrences.size());
  for (std::size_t k : order) {
    const SExpr& symbol = [&]() -> const SExpr& {
      const SExpr* cur = &expr;
      for (std::size_t i : occurrences[k]) cur = &(*cur->as_list())[i];
      return *cur;
    }();
    draws[k] = sample_concept(interp, store.id_of(*symbol.symbol_name()), rng, budget);
  }

  SExpr body = expr;
  for (std::size_t k = 0; k < occurrences.size(); ++k) {
    env->define(hidden_name(k), draws[k]);
    body = replace_at(body, occurrences[k], SExpr::symbol(hidden_name(k)));
  }
  EvalContext ctx{&rng, true, &budget};
  return interp.eval(body, env, ctx);
}

}  // namespace conch
