#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "conch/interpreter.hpp"
#include "conch/reader.hpp"
#include "conch/rewrite.hpp"
#include "conch/session.hpp"

namespace conch::testing {

/// Interpreter with the shipped prelude and rules loaded.
inline Interpreter with_prelude(std::uint64_t seed = 1) {
  Interpreter interp;
  Rng rng(seed);
  interp.eval_program(default_prelude(), rng);
  interp.rules().load(default_rules());
  return interp;
}

inline Value run(Interpreter& interp, std::string_view text, std::uint64_t seed = 1) {
  Rng rng(seed);
  return interp.eval_program(text, rng);
}

inline Value run(std::string_view text, std::uint64_t seed = 1) {
  Interpreter interp;
  return run(interp, text, seed);
}

inline std::string show_run(std::string_view text, std::uint64_t seed = 1) { return show(run(text, seed)); }

/// |observed/n - p| within k binomial standard deviations.
inline bool within_sigmas(std::size_t hits, std::size_t n, double p, double k = 4.0) {
  const double freq = static_cast<double>(hits) / static_cast<double>(n);
  return std::abs(freq - p) <= k * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline Integer as_int(const Value& v) { return std::get<Integer>(v.data); }

/// Random well-formed expression trees for round-trip properties.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : gen_(seed) {}

  SExpr tree(int depth) {
    if (depth <= 0 || pick(3) == 0) return atom();
    SExpr::List items;
    const int n = static_cast<int>(pick(5));
    for (int i = 0; i < n; ++i) items.push_back(tree(depth - 1));
    return SExpr::list(std::move(items));
  }

  SExpr atom() {
    switch (pick(6)) {
      case 0: return SExpr::symbol(symbol_name());
      case 1: {
        Integer v = static_cast<long long>(gen_() % 2000001) - 1000000;
        if (pick(4) == 0) v *= Integer("123456789012345678901234567890");
        return SExpr::integer(v);
      }
      case 2: return SExpr::real(real());
      case 3: return SExpr::boolean(pick(2) == 0);
      case 4: return SExpr::text(text());
      default: return SExpr::symbol("$" + symbol_name());
    }
  }

  std::string symbol_name() {
    static const std::string first = "abcdefghijklmnopqrstuvwxyz+-*/<>=!?";
    static const std::string rest = "abcdefghijklmnopqrstuvwxyz0123456789-?!*";
    while (true) {
      std::string s(1, first[pick(first.size())]);
      const std::size_t n = pick(8);
      for (std::size_t i = 0; i < n; ++i) s += rest[pick(rest.size())];
      // "-12" or "+1e5" would read back as numbers
      if (tokenize(s).front().kind == Token::Kind::Symbol) return s;
    }
  }

  double real() {
    switch (pick(5)) {
      case 0: return static_cast<double>(static_cast<long long>(pick(2000)) - 1000);  // integral-valued real
      case 1: return std::ldexp(static_cast<double>(gen_() >> 11), static_cast<int>(pick(120)) - 60);
      case 2: return -std::ldexp(static_cast<double>(gen_() >> 11), -static_cast<int>(pick(1100)));
      case 3: return std::uniform_real_distribution<double>(-1e6, 1e6)(gen_);
      default: return std::uniform_real_distribution<double>(0, 1)(gen_) * 1e300;
    }
  }

  std::string text() {
    static const std::string chars = "ab c\"\\\n\t;()'#xyz";
    std::string s;
    const std::size_t n = pick(8);
    for (std::size_t i = 0; i < n; ++i) s += chars[pick(chars.size())];
    return s;
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};


/// Pattern plus bindings for its variables; some patterns repeat a variable.
struct PatternCase {
  SExpr pattern;
  Bindings bindings;
};

inline PatternCase pattern_case(TreeGen& gen) {
  static const char* vars[] = {"$A", "$B", "$C", "$D"};
  Bindings sigma;
  for (const char* v : vars) sigma[v] = gen.tree(3);
  auto build = [&](auto& self, int depth) -> SExpr {
    if (depth <= 0 || gen.pick(3) == 0) {
      if (gen.pick(2) == 0) return SExpr::symbol(vars[gen.pick(4)]);
      SExpr a = gen.atom();
      while (is_pattern_variable(a)) a = gen.atom();
      return a;
    }
    SExpr::List items;
    const std::size_t n = 1 + gen.pick(4);
    for (std::size_t i = 0; i < n; ++i) items.push_back(self(self, depth - 1));
    return SExpr::list(std::move(items));
  };
  SExpr p = build(build, 4);
  Bindings used;
  for (const auto& v : pattern_variables(p)) used[v] = sigma[v];
  return {p, used};
}

/// Test-side arithmetic over integer literals and the variables in `env`.
/// Returns nullopt for anything outside + - * on integers.
inline std::optional<Integer> oracle_int(const SExpr& e, const std::map<std::string, Integer>& env) {
  if (const auto* i = std::get_if<Integer>(&e.data())) return *i;
  if (const auto* name = e.symbol_name()) {
    auto it = env.find(*name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  }
  const auto* items = e.as_list();
  if (!items || items->size() != 3 || !items->front().symbol_name()) return std::nullopt;
  auto a = oracle_int((*items)[1], env), b = oracle_int((*items)[2], env);
  if (!a || !b) return std::nullopt;
  const std::string& op = *items->front().symbol_name();
  if (op == "+") return *a + *b;
  if (op == "-") return *a - *b;
  if (op == "*") return *a * *b;
  return std::nullopt;
}

/// Truth of `#t`, `(= a b)` or `(< a b)` under the oracle arithmetic.
inline std::optional<bool> oracle_holds(const SExpr& c, const std::map<std::string, Integer>& env) {
  if (const auto* b = std::get_if<bool>(&c.data())) return *b;
  const auto* items = c.as_list();
  if (!items || items->size() != 3) return std::nullopt;
  auto a = oracle_int((*items)[1], env), b = oracle_int((*items)[2], env);
  if (!a || !b) return std::nullopt;
  if (items->front().is_symbol("=")) return *a == *b;
  if (items->front().is_symbol("<")) return *a < *b;
  return std::nullopt;
}

/// A query over x ~ (random-integer nx) and, when ny > 0, an independent
/// y ~ (random-integer ny). The condition constrains x only.
struct FiniteProgram {
  Integer nx, ny;
  SExpr condition;
  std::string queried;

  std::string source() const {
    std::string s = "(rejection-query (define x (random-integer " + nx.str() + "))";
    if (ny > 0) s += " (define y (random-integer " + ny.str() + "))";
    return s + " " + queried + " " + print(condition) + ")";
  }

  /// Satisfying values of x under the oracle.
  std::vector<Integer> satisfying(const SExpr& cond) const {
    std::vector<Integer> out;
    for (Integer x = 0; x < nx; ++x)
      if (oracle_holds(cond, {{"x", x}}).value_or(false)) out.push_back(x);
    return out;
  }
};

inline FiniteProgram finite_program(std::mt19937_64& gen) {
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto lit = [&](int lo, int hi) { return SExpr::integer(pick(lo, hi)); };
  FiniteProgram p;
  p.nx = pick(3, 20);
  p.ny = pick(0, 1) ? pick(2, 6) : 0;
  p.queried = p.ny > 0 && pick(0, 1) ? "y" : "x";

  SExpr e = SExpr::symbol("x");
  const int wraps = pick(0, 3);
  for (int i = 0; i < wraps; ++i) {
    switch (pick(0, 4)) {
      case 0: e = SExpr::list({SExpr::symbol("+"), e, lit(-9, 9)}); break;
      case 1: e = SExpr::list({SExpr::symbol("+"), lit(-9, 9), e}); break;
      case 2: e = SExpr::list({SExpr::symbol("-"), e, lit(-9, 9)}); break;
      case 3: e = SExpr::list({SExpr::symbol("-"), lit(-9, 9), e}); break;
      default: e = SExpr::list({SExpr::symbol("*"), lit(2, 3), e}); break;  // no rule isolates *
    }
  }
  // Aim inside the support most of the time, outside occasionally.
  const Integer t = pick(0, 5) == 0 ? Integer(pick(20, 40)) : Integer(pick(0, static_cast<int>(p.nx) - 1));
  const Integer c = *oracle_int(e, {{"x", t}});
  SExpr rhs = SExpr::integer(c);
  switch (pick(0, 5)) {
    case 0: p.condition = SExpr::list({SExpr::symbol("="), rhs, e}); break;
    case 1: p.condition = SExpr::list({SExpr::symbol("<"), e, rhs}); break;  // never solvable to a point
    default: p.condition = SExpr::list({SExpr::symbol("="), e, rhs}); break;
  }
  return p;
}

}  // namespace conch::testing
