#include "conch/concept_store.hpp"

#include <cmath>

#include "conch/reader.hpp"

namespace conch {

namespace {

bool same_source(const LinkSource& a, const LinkSource& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<ConceptId>(&a)) return *c == std::get<ConceptId>(b);
  return std::get<SExpr>(a) == std::get<SExpr>(b);
}

void check_weight(double w) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw EvalError("is-a weight must be a positive finite number, got " + format_real(w));
}

}  // namespace

ConceptStore::ConceptStore() : active_(kDefaultContext) { contexts_.emplace(kDefaultContext, std::map<LinkId, double>{}); }

ConceptId ConceptStore::declare_concept(const std::string& name) {
  if (by_name_.contains(name)) throw EvalError("concept '" + name + "' is already declared");
  ConceptId id{static_cast<std::uint32_t>(names_.size())};
  names_.push_back(name);
  by_name_.emplace(name, id);
  by_target_.emplace_back();
  return id;
}

std::optional<ConceptId> ConceptStore::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ConceptId ConceptStore::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw EvalError("unknown concept '" + std::string(name) + "'");
}

const std::string& ConceptStore::name(ConceptId id) const { return names_.at(id.index); }

bool ConceptStore::reaches(ConceptId from, ConceptId to) const {
  // Walks concept-to-concept links upward (child -> parent).
  std::vector<ConceptId> stack{from};
  std::vector<bool> seen(names_.size(), false);
  while (!stack.empty()) {
    ConceptId c = stack.back();
    stack.pop_back();
    if (c == to) return true;
    if (seen[c.index]) continue;
    seen[c.index] = true;
    for (const auto& l : links_)
      if (const auto* src = std::get_if<ConceptId>(&l.source); src && *src == c) stack.push_back(l.target);
  }
  return false;
}

LinkId ConceptStore::add_isa(LinkSource source, ConceptId target, double weight) {
  if (target.index >= names_.size()) throw EvalError("is-a target is not a declared concept");
  check_weight(weight);
  if (const auto* child = std::get_if<ConceptId>(&source)) {
    if (child->index >= names_.size()) throw EvalError("is-a source is not a declared concept");
    if (reaches(target, *child))
      throw EvalError("is-a link " + name(*child) + " -> " + name(target) + " would create a concept cycle");
  }
  if (find_link(source, target))
    throw EvalError("duplicate is-a link " + describe_source(source) + " -> " + name(target));
  LinkId id{static_cast<std::uint32_t>(links_.size())};
  links_.push_back(IsALink{id, std::move(source), target, weight});
  by_target_[target.index].push_back(id);
  return id;
}

std::optional<LinkId> ConceptStore::find_link(const LinkSource& source, ConceptId target) const {
  if (target.index >= by_target_.size()) return std::nullopt;
  for (LinkId id : by_target_[target.index])
    if (same_source(links_[id.index].source, source)) return id;
  return std::nullopt;
}

std::vector<WeightedLink> ConceptStore::instances_of(ConceptId c) const { return instances_of(c, active_); }

std::vector<WeightedLink> ConceptStore::instances_of(ConceptId c, std::string_view context) const {
  if (c.index >= by_target_.size()) throw EvalError("unknown concept id " + std::to_string(c.index));
  std::vector<WeightedLink> out;
  out.reserve(by_target_[c.index].size());
  for (LinkId id : by_target_[c.index]) out.push_back({&links_[id.index], effective_weight(id, context)});
  return out;
}

double ConceptStore::effective_weight(LinkId id, std::string_view context) const {
  auto ctx = contexts_.find(context);
  if (ctx == contexts_.end()) throw EvalError("unknown context '" + std::string(context) + "'");
  auto it = ctx->second.find(id);
  return it != ctx->second.end() ? it->second : links_.at(id.index).weight;
}

void ConceptStore::define_context(const std::string& name, const std::vector<std::pair<LinkId, double>>& overrides) {
  if (contexts_.contains(name)) throw EvalError("context '" + name + "' is already defined");
  std::map<LinkId, double> overlay;
  for (const auto& [id, w] : overrides) {
    if (id.index >= links_.size()) throw EvalError("context '" + name + "' overrides an unknown link");
    check_weight(w);
    if (!overlay.emplace(id, w).second)
      throw EvalError("context '" + name + "' overrides the same link twice");
  }
  contexts_.emplace(name, std::move(overlay));
}

void ConceptStore::set_context(std::string_view name) {
  if (!contexts_.contains(name)) throw EvalError("unknown context '" + std::string(name) + "'");
  active_ = std::string(name);
}

bool ConceptStore::has_context(std::string_view name) const { return contexts_.contains(name); }

std::vector<std::string> ConceptStore::context_names() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : contexts_) out.push_back(n);
  return out;
}

std::string ConceptStore::describe_source(const LinkSource& source) const {
  if (const auto* c = std::get_if<ConceptId>(&source)) return name(*c);
  return print(std::get<SExpr>(source));
}

}  // namespace conch
