#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "conch/value.hpp"

namespace conch {

/// The builtin procedures, in a fixed order:
/// `+ - * = < > <= >= not cons first rest null? list length flip
/// random-integer normal`.
const std::vector<std::shared_ptr<const Primitive>>& builtin_primitives();

std::shared_ptr<const Primitive> find_primitive(std::string_view name);

/// Deterministic arithmetic or comparison primitive that constant folding
/// may evaluate at rewrite time.
bool is_foldable_primitive(std::string_view name);

/// Calls `prim` after checking arity. Errors carry no location; the caller
/// attaches one.
Value apply_primitive(const Primitive& prim, std::span<const Value> args, Rng& rng);

/// Binds every builtin plus the constants `pi` and `null` into `env`.
void install_builtins(Env& env);

}  // namespace conch
