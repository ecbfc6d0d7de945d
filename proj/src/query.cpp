#include "conch/query.hpp"

namespace conch {

QuerySpec QuerySpec::from_form(const SExpr& form) {
  const auto* items = form.as_list();
  if (!items || items->empty() || !items->front().is_symbol("rejection-query"))
    throw EvalError("expected a rejection-query form", form.location());
  if (items->size() < 3)
    throw EvalError("rejection-query needs at least a query and a condition", form.location());
  QuerySpec spec;
  spec.definitions.assign(items->begin() + 1, items->end() - 2);
  spec.query = (*items)[items->size() - 2];
  spec.condition = items->back();
  return spec;
}

SExpr QuerySpec::to_form() const {
  SExpr::List items{SExpr::symbol("rejection-query")};
  items.insert(items.end(), definitions.begin(), definitions.end());
  items.push_back(query);
  items.push_back(condition);
  return SExpr::list(std::move(items));
}

}  // namespace conch
