#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "conch/error.hpp"

namespace conch {

using Integer = boost::multiprecision::cpp_int;

struct Symbol {
  std::string name;
  bool operator==(const Symbol&) const = default;
};

struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};

/// Immutable symbolic expression. Copies share structure.
///
/// Equality is structural and ignores source locations. Symbols whose name
/// starts with `$` are pattern variables by convention only; nothing in this
/// type treats them specially.
class SExpr {
 public:
  using List = std::vector<SExpr>;
  using Data = std::variant<Symbol, Integer, double, bool, Text, List>;

  SExpr();  // empty list
  explicit SExpr(Data data, Location where = {});

  static SExpr symbol(std::string name, Location where = {});
  static SExpr integer(Integer value, Location where = {});
  static SExpr real(double value, Location where = {});
  static SExpr boolean(bool value, Location where = {});
  static SExpr text(std::string value, Location where = {});
  static SExpr list(List items, Location where = {});

  const Data& data() const;
  Location location() const;

  bool is_symbol() const { return std::holds_alternative<Symbol>(data()); }
  bool is_list() const { return std::holds_alternative<List>(data()); }
  bool is_integer() const { return std::holds_alternative<Integer>(data()); }
  bool is_real() const { return std::holds_alternative<double>(data()); }
  bool is_atom() const { return !is_list(); }

  /// Symbol name, or nullptr for non-symbols.
  const std::string* symbol_name() const;
  bool is_symbol(std::string_view name) const;
  /// List items, or nullptr for atoms.
  const List* as_list() const;
  /// Symbol name of the head of a non-empty list whose first item is a symbol.
  const std::string* head_symbol() const;

  friend bool operator==(const SExpr& a, const SExpr& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

inline bool is_pattern_variable(const SExpr& e) {
  const auto* name = e.symbol_name();
  return name && name->size() > 1 && (*name)[0] == '$';
}

}  // namespace conch
