#include "conch/value.hpp"

#include <cmath>

#include "conch/reader.hpp"

namespace conch {

Value cons(Value head, Value tail) {
  return Value(std::make_shared<const Pair>(Pair{std::move(head), std::move(tail)}));
}

Value make_list(std::span<const Value> items) {
  Value out = EmptyList{};
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, std::move(out));
  return out;
}

std::optional<std::vector<Value>> list_items(const Value& v) {
  std::vector<Value> out;
  const Value* cur = &v;
  while (const Pair* p = cur->pair()) {
    out.push_back(p->head);
    cur = &p->tail;
  }
  if (!cur->is<EmptyList>()) return std::nullopt;
  return out;
}

double to_double(const Value& number) {
  if (const auto* i = number.get_if<Integer>()) return i->convert_to<double>();
  return std::get<double>(number.data);
}

namespace {

// Exact comparison of an integer against a double.
std::optional<std::strong_ordering> compare_mixed(const Integer& i, double d) {
  if (std::isnan(d)) return std::nullopt;
  if (std::isinf(d)) return d > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  const double fl = std::floor(d);
  const Integer whole(fl);
  if (i < whole) return std::strong_ordering::less;
  if (i > whole) return std::strong_ordering::greater;
  return d > fl ? std::strong_ordering::less : std::strong_ordering::equal;
}

std::strong_ordering flip_order(std::strong_ordering o) {
  if (o == std::strong_ordering::less) return std::strong_ordering::greater;
  if (o == std::strong_ordering::greater) return std::strong_ordering::less;
  return o;
}

}  // namespace

std::optional<std::strong_ordering> compare_numbers(const Value& a, const Value& b) {
  const auto* ai = a.get_if<Integer>();
  const auto* bi = b.get_if<Integer>();
  if (ai && bi) {
    if (*ai < *bi) return std::strong_ordering::less;
    if (*ai > *bi) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  if (ai) return compare_mixed(*ai, std::get<double>(b.data));
  if (bi) {
    auto o = compare_mixed(*bi, std::get<double>(a.data));
    if (!o) return o;
    return flip_order(*o);
  }
  const double x = std::get<double>(a.data), y = std::get<double>(b.data);
  if (std::isnan(x) || std::isnan(y)) return std::nullopt;
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    auto o = compare_numbers(a, b);
    return o && *o == std::strong_ordering::equal;
  }
  if (a.data.index() != b.data.index()) return false;
  if (const auto* x = a.get_if<bool>()) return *x == std::get<bool>(b.data);
  if (const auto* x = a.get_if<Text>()) return *x == std::get<Text>(b.data);
  if (const auto* x = a.get_if<Symbol>()) return *x == std::get<Symbol>(b.data);
  if (const auto* x = a.get_if<ConceptRef>()) return x->id == std::get<ConceptRef>(b.data).id;
  if (a.is<EmptyList>() || a.is<Unspecified>()) return true;
  if (const Pair* p = a.pair()) {
    const Pair* q = b.pair();
    return values_equal(p->head, q->head) && values_equal(p->tail, q->tail);
  }
  return false;
}

std::string type_name(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unspecified>) return "unspecified";
        else if constexpr (std::is_same_v<T, EmptyList>) return "empty list";
        else if constexpr (std::is_same_v<T, bool>) return "boolean";
        else if constexpr (std::is_same_v<T, Integer>) return "integer";
        else if constexpr (std::is_same_v<T, double>) return "real";
        else if constexpr (std::is_same_v<T, Text>) return "string";
        else if constexpr (std::is_same_v<T, Symbol>) return "symbol";
        else if constexpr (std::is_same_v<T, std::shared_ptr<const Pair>>) return "pair";
        else if constexpr (std::is_same_v<T, ConceptRef>) return "concept";
        else return "procedure";
      },
      v.data);
}

namespace {

void show_into(const Value& v, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unspecified>) {
          out += "#<unspecified>";
        } else if constexpr (std::is_same_v<T, EmptyList>) {
          out += "()";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += x ? "#t" : "#f";
        } else if constexpr (std::is_same_v<T, Integer>) {
          out += x.str();
        } else if constexpr (std::is_same_v<T, double>) {
          out += format_real(x);
        } else if constexpr (std::is_same_v<T, Text>) {
          out += quote_text(x.value);
        } else if constexpr (std::is_same_v<T, Symbol>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Pair>>) {
          out += '(';
          const Value* cur = &v;
          bool first = true;
          while (const Pair* p = cur->pair()) {
            if (!first) out += ' ';
            first = false;
            show_into(p->head, out);
            cur = &p->tail;
          }
          if (!cur->is<EmptyList>()) {
            out += " . ";
            show_into(*cur, out);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Closure>>) {
          out += x->name.empty() ? "#<procedure>" : "#<procedure " + x->name + ">";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const Primitive>>) {
          out += "#<primitive " + x->name + ">";
        } else {
          out += "#<concept " + x.name + ">";
        }
      },
      v.data);
}

}  // namespace

std::string show(const Value& v) {
  std::string out;
  show_into(v, out);
  return out;
}

Value quote(const SExpr& datum) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SExpr::List>) {
          Value out = EmptyList{};
          for (auto it = x.rbegin(); it != x.rend(); ++it) out = cons(quote(*it), std::move(out));
          return out;
        } else {
          return Value(x);
        }
      },
      datum.data());
}

std::optional<SExpr> to_datum(const Value& v) {
  if (const auto* x = v.get_if<bool>()) return SExpr::boolean(*x);
  if (const auto* x = v.get_if<Integer>()) return SExpr::integer(*x);
  if (const auto* x = v.get_if<double>()) return SExpr::real(*x);
  if (const auto* x = v.get_if<Text>()) return SExpr::text(x->value);
  if (const auto* x = v.get_if<Symbol>()) return SExpr::symbol(x->name);
  if (v.is<EmptyList>()) return SExpr::list({});
  if (v.pair()) {
    auto items = list_items(v);
    if (!items) return std::nullopt;
    SExpr::List out;
    for (const auto& item : *items) {
      auto d = to_datum(item);
      if (!d) return std::nullopt;
      out.push_back(std::move(*d));
    }
    return SExpr::list(std::move(out));
  }
  return std::nullopt;
}

void Env::define(const std::string& name, Value value) {
  auto [it, inserted] = frame_.try_emplace(name, std::move(value));
  if (!inserted) throw EvalError("'" + name + "' is already defined in this scope");
}

const Value* Env::lookup(const std::string& name) const {
  for (const Env* e = this; e; e = e->parent_.get()) {
    auto it = e->frame_.find(name);
    if (it != e->frame_.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace conch
