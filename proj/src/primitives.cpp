#include "conch/primitives.hpp"

#include <numbers>

namespace conch {

namespace {

const Value& number_arg(const char* who, std::span<const Value> args, std::size_t i) {
  if (!args[i].is_number())
    throw EvalError(std::string(who) + ": expected a number, got " + type_name(args[i]) + " " + show(args[i]));
  return args[i];
}

Value add(const Value& a, const Value& b) {
  if (a.is<Integer>() && b.is<Integer>()) return Value(std::get<Integer>(a.data) + std::get<Integer>(b.data));
  return Value(to_double(a) + to_double(b));
}

Value sub(const Value& a, const Value& b) {
  if (a.is<Integer>() && b.is<Integer>()) return Value(std::get<Integer>(a.data) - std::get<Integer>(b.data));
  return Value(to_double(a) - to_double(b));
}

Value mul(const Value& a, const Value& b) {
  if (a.is<Integer>() && b.is<Integer>()) return Value(std::get<Integer>(a.data) * std::get<Integer>(b.data));
  return Value(to_double(a) * to_double(b));
}

Value plus(std::span<const Value> args, Rng&) {
  Value acc(0);
  for (std::size_t i = 0; i < args.size(); ++i) acc = add(acc, number_arg("+", args, i));
  return acc;
}

Value minus(std::span<const Value> args, Rng&) {
  if (args.size() == 1) return sub(Value(0), number_arg("-", args, 0));
  Value acc = number_arg("-", args, 0);
  for (std::size_t i = 1; i < args.size(); ++i) acc = sub(acc, number_arg("-", args, i));
  return acc;
}

Value times(std::span<const Value> args, Rng&) {
  Value acc(1);
  for (std::size_t i = 0; i < args.size(); ++i) acc = mul(acc, number_arg("*", args, i));
  return acc;
}

Value equal(std::span<const Value> args, Rng&) {
  for (std::size_t i = 1; i < args.size(); ++i)
    if (!values_equal(args[i - 1], args[i])) return Value(false);
  return Value(true);
}

template <class Accept>
PrimitiveFn ordered(const char* who, Accept accept) {
  return [who, accept](std::span<const Value> args, Rng&) {
    for (std::size_t i = 0; i < args.size(); ++i) number_arg(who, args, i);
    for (std::size_t i = 1; i < args.size(); ++i) {
      auto o = compare_numbers(args[i - 1], args[i]);
      if (!o || !accept(*o)) return Value(false);
    }
    return Value(true);
  };
}

Value not_(std::span<const Value> args, Rng&) {
  const auto* b = args[0].get_if<bool>();
  if (!b) throw EvalError("not: expected a boolean, got " + show(args[0]));
  return Value(!*b);
}

Value cons_(std::span<const Value> args, Rng&) { return cons(args[0], args[1]); }

Value first(std::span<const Value> args, Rng&) {
  const Pair* p = args[0].pair();
  if (!p) throw EvalError("first: expected a pair, got " + show(args[0]));
  return p->head;
}

Value rest(std::span<const Value> args, Rng&) {
  const Pair* p = args[0].pair();
  if (!p) throw EvalError("rest: expected a pair, got " + show(args[0]));
  return p->tail;
}

Value null_p(std::span<const Value> args, Rng&) { return Value(args[0].is<EmptyList>()); }

Value list(std::span<const Value> args, Rng&) { return make_list(args); }

Value length(std::span<const Value> args, Rng&) {
  auto items = list_items(args[0]);
  if (!items) throw EvalError("length: expected a proper list, got " + show(args[0]));
  return Value(Integer(items->size()));
}

double probability_arg(const char* who, const Value& v) {
  if (!v.is_number()) throw EvalError(std::string(who) + ": expected a probability, got " + show(v));
  const double p = to_double(v);
  if (!(p >= 0.0 && p <= 1.0)) throw EvalError(std::string(who) + ": probability out of [0, 1]: " + show(v));
  return p;
}

Value flip(std::span<const Value> args, Rng& rng) {
  const double p = args.empty() ? 0.5 : probability_arg("flip", args[0]);
  return Value(rng.flip(p));
}

Value random_integer(std::span<const Value> args, Rng& rng) {
  const auto* n = args[0].get_if<Integer>();
  if (!n) throw EvalError("random-integer: expected an integer, got " + show(args[0]));
  if (*n <= 0) throw EvalError("random-integer: domain error, n must be positive, got " + n->str());
  return Value(rng.below(*n));
}

Value normal(std::span<const Value> args, Rng& rng) {
  const double mean = to_double(number_arg("normal", args, 0));
  const double stdev = to_double(number_arg("normal", args, 1));
  if (!(stdev >= 0.0)) throw EvalError("normal: domain error, negative standard deviation " + show(args[1]));
  return Value(rng.normal(mean, stdev));
}

std::vector<std::shared_ptr<const Primitive>> make_builtins() {
  auto p = [](std::string name, int lo, int hi, bool stochastic, PrimitiveFn fn) {
    return std::make_shared<const Primitive>(Primitive{std::move(name), lo, hi, stochastic, std::move(fn)});
  };
  using O = std::strong_ordering;
  return {
      p("+", 0, -1, false, plus),
      p("-", 1, -1, false, minus),
      p("*", 0, -1, false, times),
      p("=", 2, -1, false, equal),
      p("<", 2, -1, false, ordered("<", [](O o) { return o == O::less; })),
      p(">", 2, -1, false, ordered(">", [](O o) { return o == O::greater; })),
      p("<=", 2, -1, false, ordered("<=", [](O o) { return o != O::greater; })),
      p(">=", 2, -1, false, ordered(">=", [](O o) { return o != O::less; })),
      p("not", 1, 1, false, not_),
      p("cons", 2, 2, false, cons_),
      p("first", 1, 1, false, first),
      p("rest", 1, 1, false, rest),
      p("null?", 1, 1, false, null_p),
      p("list", 0, -1, false, list),
      p("length", 1, 1, false, length),
      p("flip", 0, 1, true, flip),
      p("random-integer", 1, 1, true, random_integer),
      p("normal", 2, 2, true, normal),
  };
}

}  // namespace

const std::vector<std::shared_ptr<const Primitive>>& builtin_primitives() {
  static const auto builtins = make_builtins();
  return builtins;
}

std::shared_ptr<const Primitive> find_primitive(std::string_view name) {
  for (const auto& p : builtin_primitives())
    if (p->name == name) return p;
  return nullptr;
}

bool is_foldable_primitive(std::string_view name) {
  static constexpr std::string_view kFoldable[] = {"+", "-", "*", "=", "<", ">", "<=", ">=", "not"};
  for (auto n : kFoldable)
    if (n == name) return true;
  return false;
}

Value apply_primitive(const Primitive& prim, std::span<const Value> args, Rng& rng) {
  const int n = static_cast<int>(args.size());
  if (n < prim.min_args || (prim.max_args >= 0 && n > prim.max_args)) {
    std::string expected = std::to_string(prim.min_args);
    if (prim.max_args < 0) expected += " or more";
    else if (prim.max_args != prim.min_args) expected += " to " + std::to_string(prim.max_args);
    throw EvalError(prim.name + ": arity mismatch, expected " + expected + " argument(s), got " + std::to_string(n));
  }
  return prim.fn(args, rng);
}

void install_builtins(Env& env) {
  for (const auto& p : builtin_primitives()) env.define(p->name, Value(p));
  env.define("pi", Value(std::numbers::pi));
  env.define("null", Value(EmptyList{}));
}

}  // namespace conch
