#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "conch/sexpr.hpp"
#include "conch/value.hpp"

namespace conch {

struct LinkId {
  std::uint32_t index = 0;
  auto operator<=>(const LinkId&) const = default;
};

/// Either an expression template or another concept.
using LinkSource = std::variant<SExpr, ConceptId>;

struct IsALink {
  LinkId id;
  LinkSource source;
  ConceptId target;
  double weight = 1.0;
};

struct WeightedLink {
  const IsALink* link;
  double weight;  // after context resolution
};

/// Concept registry plus weighted is-a links.
///
/// Links keep insertion order; sampling iterates them in that order, which
/// keeps seeded runs reproducible. Context overlays reassign weights of
/// existing links without touching their base weights. The context named
/// "default" always exists and is empty.
class ConceptStore {
 public:
  static constexpr std::string_view kDefaultContext = "default";

  ConceptStore();

  ConceptId declare_concept(const std::string& name);
  std::optional<ConceptId> find(std::string_view name) const;
  /// Throws EvalError for undeclared names.
  ConceptId id_of(std::string_view name) const;
  const std::string& name(ConceptId id) const;
  std::size_t concept_count() const { return names_.size(); }
  ConceptRef ref(ConceptId id) const { return {id, name(id)}; }

  /// Adds `source is-a target`. A bare concept source must not close a cycle
  /// of concept-to-concept links; expression sources may mention the target.
  LinkId add_isa(LinkSource source, ConceptId target, double weight = 1.0);
  std::optional<LinkId> find_link(const LinkSource& source, ConceptId target) const;
  const IsALink& link(LinkId id) const { return links_.at(id.index); }
  const std::vector<IsALink>& links() const { return links_; }

  /// Links targeting `c` in insertion order, with weights resolved in the
  /// active context.
  std::vector<WeightedLink> instances_of(ConceptId c) const;
  std::vector<WeightedLink> instances_of(ConceptId c, std::string_view context) const;

  void define_context(const std::string& name, const std::vector<std::pair<LinkId, double>>& overrides);
  void set_context(std::string_view name);
  const std::string& active_context() const { return active_; }
  bool has_context(std::string_view name) const;
  std::vector<std::string> context_names() const;

  double effective_weight(LinkId id, std::string_view context) const;

  std::string describe_source(const LinkSource& source) const;

 private:
  bool reaches(ConceptId from, ConceptId to) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, ConceptId> by_name_;
  std::vector<IsALink> links_;
  std::vector<std::vector<LinkId>> by_target_;
  std::map<std::string, std::map<LinkId, double>, std::less<>> contexts_;
  std::string active_;
};

}  // namespace conch
