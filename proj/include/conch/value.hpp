#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "conch/rng.hpp"
#include "conch/sexpr.hpp"

namespace conch {

class Env;
using EnvPtr = std::shared_ptr<Env>;

struct ConceptId {
  std::uint32_t index = 0;
  auto operator<=>(const ConceptId&) const = default;
};

struct Pair;
struct Closure;
struct Primitive;

/// Result of `define`, `concept` and friends; never printed at top level.
struct Unspecified {
  bool operator==(const Unspecified&) const = default;
};
struct EmptyList {
  bool operator==(const EmptyList&) const = default;
};
struct ConceptRef {
  ConceptId id;
  std::string name;
};

/// Runtime value. Cheap to copy: compound parts are shared and immutable.
struct Value {
  using Data = std::variant<Unspecified, EmptyList, bool, Integer, double, Text, Symbol,
                            std::shared_ptr<const Pair>, std::shared_ptr<const Closure>,
                            std::shared_ptr<const Primitive>, ConceptRef>;
  Data data;

  Value() = default;
  Value(bool b) : data(b) {}
  Value(const char*) = delete;
  Value(Integer i) : data(std::move(i)) {}
  Value(int i) : data(Integer(i)) {}
  Value(double d) : data(d) {}
  Value(Text t) : data(std::move(t)) {}
  Value(Symbol s) : data(std::move(s)) {}
  Value(EmptyList e) : data(e) {}
  Value(std::shared_ptr<const Pair> p) : data(std::move(p)) {}
  Value(std::shared_ptr<const Closure> c) : data(std::move(c)) {}
  Value(std::shared_ptr<const Primitive> p) : data(std::move(p)) {}
  Value(ConceptRef c) : data(std::move(c)) {}

  template <class T>
  bool is() const { return std::holds_alternative<T>(data); }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&data); }

  bool is_number() const { return is<Integer>() || is<double>(); }
  bool is_procedure() const {
    return is<std::shared_ptr<const Closure>>() || is<std::shared_ptr<const Primitive>>();
  }
  const Pair* pair() const {
    const auto* p = get_if<std::shared_ptr<const Pair>>();
    return p ? p->get() : nullptr;
  }
};

struct Pair {
  Value head;
  Value tail;
};

struct Closure {
  std::vector<std::string> params;
  std::vector<SExpr> body;
  EnvPtr env;
  std::string name;  // empty for anonymous lambdas
};

using PrimitiveFn = std::function<Value(std::span<const Value>, Rng&)>;

struct Primitive {
  std::string name;
  int min_args;
  int max_args;  // -1: variadic
  bool stochastic;
  PrimitiveFn fn;
};

Value cons(Value head, Value tail);
Value make_list(std::span<const Value> items);

/// Elements of a proper list, or nullopt for improper lists and non-lists.
std::optional<std::vector<Value>> list_items(const Value& v);

/// `=` semantics: numbers by numeric value (5 = 5.0), structural over
/// booleans, text, symbols, concepts and lists; procedures are never equal.
bool values_equal(const Value& a, const Value& b);

/// Three-way numeric comparison; both values must be numbers. NaN compares
/// unordered and yields nullopt.
std::optional<std::strong_ordering> compare_numbers(const Value& a, const Value& b);

double to_double(const Value& number);

/// Canonical printed form, consistent with `print(SExpr)` for data values.
std::string show(const Value& v);
std::string type_name(const Value& v);

/// Quoted datum: lists become pairs, symbols stay symbols.
Value quote(const SExpr& datum);
/// Inverse of `quote` for data values; nullopt for procedures, concepts,
/// improper lists and `Unspecified`.
std::optional<SExpr> to_datum(const Value& v);

/// Lexical frame. Lookup walks outward; `define` binds in this frame only.
class Env {
 public:
  explicit Env(EnvPtr parent = nullptr) : parent_(std::move(parent)) {}

  static EnvPtr make(EnvPtr parent = nullptr) { return std::make_shared<Env>(std::move(parent)); }

  /// Throws EvalError if `name` is already bound in this frame.
  void define(const std::string& name, Value value);
  const Value* lookup(const std::string& name) const;
  bool bound_here(const std::string& name) const { return frame_.contains(name); }
  const EnvPtr& parent() const { return parent_; }

 private:
  std::unordered_map<std::string, Value> frame_;
  EnvPtr parent_;
};

}  // namespace conch
