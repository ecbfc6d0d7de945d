#include "conch/sexpr.hpp"

#include <cmath>

namespace conch {

struct SExpr::Node {
  Data data;
  Location where;
};

SExpr::SExpr() : SExpr(List{}) {}

SExpr::SExpr(Data data, Location where)
    : node_(std::make_shared<const Node>(Node{std::move(data), where})) {}

SExpr SExpr::symbol(std::string name, Location where) { return SExpr(Symbol{std::move(name)}, where); }
SExpr SExpr::integer(Integer value, Location where) { return SExpr(std::move(value), where); }
SExpr SExpr::real(double value, Location where) { return SExpr(value, where); }
SExpr SExpr::boolean(bool value, Location where) { return SExpr(value, where); }
SExpr SExpr::text(std::string value, Location where) { return SExpr(Text{std::move(value)}, where); }
SExpr SExpr::list(List items, Location where) { return SExpr(std::move(items), where); }

const SExpr::Data& SExpr::data() const { return node_->data; }
Location SExpr::location() const { return node_->where; }

const std::string* SExpr::symbol_name() const {
  const auto* s = std::get_if<Symbol>(&data());
  return s ? &s->name : nullptr;
}

bool SExpr::is_symbol(std::string_view name) const {
  const auto* s = symbol_name();
  return s && *s == name;
}

const SExpr::List* SExpr::as_list() const { return std::get_if<List>(&data()); }

const std::string* SExpr::head_symbol() const {
  const auto* items = as_list();
  if (!items || items->empty()) return nullptr;
  return items->front().symbol_name();
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.data();
  const auto& y = b.data();
  if (x.index() != y.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(y);
        if constexpr (std::is_same_v<T, double>) {
          return lhs == rhs || (std::isnan(lhs) && std::isnan(rhs));
        } else {
          return lhs == rhs;
        }
      },
      x);
}

}  // namespace conch
