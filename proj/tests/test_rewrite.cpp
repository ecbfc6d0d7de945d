#include "doctest.h"
#include "support.hpp"

using namespace conch;

namespace {

SExpr P(std::string_view text) { return parse_one(text); }

RuleSet isolate_rule() {
  RuleSet rules;
  rules.load("(equivalence (= (+ $A $B) $C) (= $A (- $C $B)))");
  return rules;
}

RuleSet shipped_rules() {
  RuleSet rules;
  rules.load(default_rules());
  return rules;
}

std::vector<std::string> printed(const std::vector<SExpr>& chain) {
  std::vector<std::string> out;
  for (const auto& e : chain) out.push_back(print(e));
  return out;
}

}  // namespace

TEST_CASE("match") {
  auto b = match(P("(= (+ $A $B) $C)"), P("(= (+ x 5) 10)"));
  REQUIRE(b);
  CHECK(b->size() == 3);
  CHECK(b->at("$A") == P("x"));
  CHECK(b->at("$B") == P("5"));
  CHECK(b->at("$C") == P("10"));

  auto any = match(P("$A"), P("(f (g 1) \"s\")"));
  REQUIRE(any);
  CHECK(any->at("$A") == P("(f (g 1) \"s\")"));

  CHECK_FALSE(match(P("(+ $A $A)"), P("(+ 2 3)")));
  auto same = match(P("(+ $A $A)"), P("(+ 2 2)"));
  REQUIRE(same);
  CHECK(same->at("$A") == P("2"));
  CHECK(match(P("(+ $A $A)"), P("(+ (f x) (f x))")));
  CHECK_FALSE(match(P("(+ $A $A)"), P("(+ 2 2.0)")));

  CHECK_FALSE(match(P("(+ $A $B)"), P("(+ 1 2 3)")));
  CHECK_FALSE(match(P("(+ $A)"), P("x")));
  CHECK_FALSE(match(P("(- $A $B)"), P("(+ 1 2)")));
  CHECK(match(P("(f 1 \"s\" #t)"), P("(f 1 \"s\" #t)")));
  CHECK_FALSE(match(P("1"), P("1.0")));
  CHECK(match(P("$"), P("$")));  // a lone dollar sign is an ordinary symbol
  CHECK_FALSE(match(P("$"), P("x")));
}

TEST_CASE("substitute") {
  Bindings b{{"$A", P("x")}, {"$B", P("5")}, {"$C", P("10")}};
  CHECK(print(substitute(P("(= $A (- $C $B))"), b)) == "(= x (- 10 5))");
  CHECK(substitute(P("(f 1 (g 2))"), b) == P("(f 1 (g 2))"));
  CHECK_THROWS_WITH_AS(substitute(P("(+ $A $Z)"), b), doctest::Contains("$Z"), EvalError);
  // Simultaneous: a bound value mentioning a variable is not substituted again.
  CHECK(print(substitute(P("(f $A $B)"), {{"$A", P("$B")}, {"$B", P("1")}})) == "(f $B 1)");
}

TEST_CASE("property: match recovers substituted bindings") {
  testing::TreeGen gen(555);
  for (int i = 0; i < 10000; ++i) {
    auto [pattern, sigma] = testing::pattern_case(gen);
    const SExpr e = substitute(pattern, sigma);
    auto back = match(pattern, e);
    INFO(print(pattern));
    REQUIRE(back);
    REQUIRE(*back == sigma);
    REQUIRE(substitute(pattern, *back) == e);
  }
}

TEST_CASE("property: repeated variables reject unequal bindings") {
  testing::TreeGen gen(556);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const SExpr u = gen.tree(3), v = gen.tree(3);
    const SExpr pattern = SExpr::list({SExpr::symbol("f"), SExpr::symbol("$A"), gen.tree(2), SExpr::symbol("$A")});
    if (!pattern_variables(pattern).count("$A") || pattern_variables(pattern).size() != 1) continue;
    const SExpr e = SExpr::list({SExpr::symbol("f"), u, pattern.as_list()->at(2), v});
    CHECK(match(pattern, e).has_value() == (u == v));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("constant_fold") {
  CHECK(print(constant_fold(P("(= x (- 10 5))"))) == "(= x 5)");
  CHECK(print(constant_fold(P("(= x y)"))) == "(= x y)");
  CHECK(print(constant_fold(P("(+ 1 (* 2 3) (- 4))"))) == "3");
  CHECK(print(constant_fold(P("(< 1 2.5)"))) == "#t");
  CHECK(print(constant_fold(P("(+ 1 #t)"))) == "(+ 1 #t)");
  CHECK(print(constant_fold(P("(+ (+ 1 #t) (+ 2 2))"))) == "(+ (+ 1 #t) 4)");
  CHECK(print(constant_fold(P("(quote (+ 1 2))"))) == "(quote (+ 1 2))");
  CHECK(print(constant_fold(P("(random-integer (+ 5 5))"))) == "(random-integer 10)");
  CHECK(print(constant_fold(P("(f (- 3 1) x)"))) == "(f 2 x)");
  CHECK(print(constant_fold(P("(not (= 1 2))"))) == "#t");
}

TEST_CASE("property: folding agrees with the evaluator on ground trees") {
  std::mt19937_64 gen(31337);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(gen() % n); };
  auto tree = [&](auto& self, int depth) -> SExpr {
    if (depth <= 0 || pick(3) == 0) {
      switch (pick(6)) {
        case 0: return SExpr::real(static_cast<double>(static_cast<int>(pick(200)) - 100) / 8.0);
        case 1: return SExpr::boolean(pick(2) == 0);
        default: return SExpr::integer(static_cast<int>(pick(41)) - 20);
      }
    }
    static const char* ops[] = {"+", "-", "*", "<", "=", ">", "<=", ">=", "not"};
    const char* op = ops[pick(9)];
    SExpr::List items{SExpr::symbol(op)};
    const std::size_t n = std::string_view(op) == "not" ? 1 : 1 + pick(3);
    for (std::size_t i = 0; i < n; ++i) items.push_back(self(self, depth - 1));
    return SExpr::list(std::move(items));
  };
  Interpreter interp;
  int folded = 0;
  for (int i = 0; i < 3000; ++i) {
    const SExpr e = tree(tree, 4);
    const SExpr f = constant_fold(e);
    Rng rng(1);
    std::optional<Value> v;
    try {
      v = interp.eval(e, interp.global(), rng);
    } catch (const EvalError&) {
    }
    INFO(print(e));
    if (v) {
      auto datum = to_datum(*v);
      REQUIRE(datum);
      CHECK(print(f) == print(*datum));
      ++folded;
    } else {
      CHECK(f.is_list());  // the failing application survives
    }
  }
  CHECK(folded > 500);
}

TEST_CASE("solve_condition") {
  SUBCASE("single rewrite") {
    auto r = solve_condition(P("(= (+ x 5) 10)"), "x", isolate_rule());
    CHECK(r.solved);
    CHECK(print(r.condition) == "(= x 5)");
    CHECK(printed(r.chain) == std::vector<std::string>{"(= (+ x 5) 10)", "(= x (- 10 5))", "(= x 5)"});
    CHECK(r.steps == 1);
  }
  SUBCASE("already solved") {
    auto r = solve_condition(P("(= x 7)"), "x", isolate_rule());
    CHECK(r.solved);
    CHECK(r.steps == 0);
    CHECK(print(r.condition) == "(= x 7)");
  }
  SUBCASE("nested") {
    auto r = solve_condition(P("(= (+ (+ x 2) 3) 10)"), "x", isolate_rule());
    CHECK(r.solved);
    CHECK(print(r.condition) == "(= x 5)");
    CHECK(r.steps == 2);
    testing::FiniteProgram p{10, 0, P("(= (+ (+ x 2) 3) 10)"), "x"};
    CHECK(p.satisfying(P("(= (+ (+ x 2) 3) 10)")) == p.satisfying(r.condition));
  }
  SUBCASE("ground on the left is normalized") {
    auto r = solve_condition(P("(= 10 (+ x 5))"), "x", shipped_rules());
    CHECK(r.solved);
    CHECK(print(r.condition) == "(= x 5)");
  }
  SUBCASE("companion rules") {
    const RuleSet rules = shipped_rules();
    CHECK(print(solve_condition(P("(= (+ 5 x) 10)"), "x", rules).condition) == "(= x 5)");
    CHECK(print(solve_condition(P("(= (- x 3) 4)"), "x", rules).condition) == "(= x 7)");
    CHECK(print(solve_condition(P("(= (- 10 x) 4)"), "x", rules).condition) == "(= x 6)");
    CHECK(print(solve_condition(P("(= 4 (- (+ 1 x) 3))"), "x", rules).condition) == "(= x 6)");
  }
  SUBCASE("unsolvable conditions come back unchanged") {
    const RuleSet rules = shipped_rules();
    for (const char* c : {"(= (* 2 x) 10)", "(< x 3)", "(= (+ x y) 10)", "(= (+ x x) 10)", "#t"}) {
      auto r = solve_condition(P(c), "x", rules);
      INFO(c);
      CHECK_FALSE(r.solved);
      CHECK(print(r.condition) == c);
    }
  }
  SUBCASE("step limit bounds the work") {
    auto r = solve_condition(P("(= (+ (+ (+ x 1) 1) 1) 10)"), "x", isolate_rule(), SolveOptions{2});
    CHECK_FALSE(r.solved);
    CHECK(r.steps <= 2);
    CHECK(print(r.condition) == "(= (+ (+ (+ x 1) 1) 1) 10)");
    auto r0 = solve_condition(P("(= (+ x 1) 10)"), "x", isolate_rule(), SolveOptions{0});
    CHECK_FALSE(r0.solved);
    CHECK(r0.steps == 0);
  }
  SUBCASE("no rules") {
    CHECK_FALSE(solve_condition(P("(= (+ x 5) 10)"), "x", RuleSet{}).solved);
  }
}

TEST_CASE("implications are never used for solving") {
  RuleSet rules;
  rules.load("(implication weaken (= (+ $A $B) $C) (= $A (- $C $B)))");
  CHECK(rules.size() == 1);
  CHECK(rules.rules()[0].kind == RewriteRule::Kind::Implication);
  CHECK_FALSE(solve_condition(P("(= (+ x 5) 10)"), "x", rules).solved);
}

TEST_CASE("property: solving preserves satisfaction sets") {
  std::mt19937_64 gen(8080);
  const RuleSet rules = shipped_rules();
  int solved = 0;
  for (int i = 0; i < 500; ++i) {
    auto p = testing::finite_program(gen);
    auto r = solve_condition(p.condition, "x", rules);
    INFO(print(p.condition) << " => " << print(r.condition));
    CHECK(r.steps <= 100);
    CHECK(p.satisfying(p.condition) == p.satisfying(r.condition));
    for (const auto& step : r.chain) CHECK(pattern_variables(step).empty());
    solved += r.solved;
  }
  CHECK(solved > 250);
}

TEST_CASE("optimize_query") {
  const RuleSet rules = shipped_rules();
  ConceptStore store;
  auto spec = [](std::string_view text) { return QuerySpec::from_form(parse_one(text)); };

  SUBCASE("point mass inside the support") {
    auto out = optimize_query(spec("(rejection-query (define x (random-integer 10)) x (= (+ x 5) 10))"), rules, store);
    CHECK(out.report.fired);
    CHECK(out.report.variable == "x");
    CHECK(print(*out.report.rewritten_definition) == "(define x 5)");
    CHECK(print(*out.report.original_definition) == "(define x (random-integer 10))");
    CHECK(print(out.spec.condition) == "#t");
    CHECK(print(out.spec.to_form()) == "(rejection-query (define x 5) x #t)");
  }
  SUBCASE("trivial condition") {
    auto s = spec("(rejection-query (define x (random-integer 10)) x #t)");
    auto out = optimize_query(s, rules, store);
    CHECK_FALSE(out.report.fired);
    CHECK(out.spec.to_form() == s.to_form());
  }
  SUBCASE("outside the support") {
    CHECK_THROWS_AS(optimize_query(spec("(rejection-query (define x (random-integer 10)) x (= (+ x 5) 100))"), rules, store),
                    ZeroProbabilityError);
    CHECK_THROWS_AS(optimize_query(spec("(rejection-query (define x (random-integer 10)) x (= (+ x 5) 4))"), rules, store),
                    ZeroProbabilityError);
  }
  SUBCASE("non-integer or continuous priors are skipped") {
    for (const char* q : {"(rejection-query (define x (normal 0 1)) x (= (+ x 5) 10))",
                          "(rejection-query (define x (random-integer 10)) x (= (+ x 0.5) 10))",
                          "(rejection-query (define x 3) x (= (+ x 5) 10))"}) {
      INFO(q);
      auto out = optimize_query(spec(q), rules, store);
      CHECK_FALSE(out.report.fired);
      CHECK(out.spec.to_form() == spec(q).to_form());
    }
  }
  SUBCASE("only the solved variable is replaced") {
    auto out = optimize_query(
        spec("(rejection-query (define y (random-integer 4)) (define x (random-integer 10)) (list x y) (= (- x 2) 1))"),
        rules, store);
    CHECK(out.report.fired);
    CHECK(print(out.spec.to_form()) == "(rejection-query (define y (random-integer 4)) (define x 3) (list x y) #t)");
  }
}

TEST_CASE("rule files") {
  RuleSet rules;
  rules.load(default_rules());
  CHECK(rules.size() == 6);
  CHECK(rules.rules()[0].name == "plus-isolate-left");

  RuleSet auto_named;
  auto_named.load("(equivalence (= $A $B) (= $B $A)) (equivalence (= $A $B) (= $B $A))");
  CHECK(auto_named.rules()[0].name == "rule-1");
  CHECK(auto_named.rules()[1].name == "rule-2");

  RuleSet bad;
  CHECK_THROWS_WITH_AS(bad.load("(equivalence r (= (+ $A $B) $C) (= $A $D))"), doctest::Contains("$D"), EvalError);
  CHECK_THROWS_WITH_AS(bad.load("(equivalence r2 (= $A $B) (= $A (+ $B $C)))"), doctest::Contains("free"), EvalError);
  CHECK_THROWS_WITH_AS(bad.load("(implication r3 (= $A $B) (= $A $C))"), doctest::Contains("free"), EvalError);
  CHECK_NOTHROW(bad.load("(implication r4 (= $A $B $C) (= $A $B))"));  // one-way: rhs may drop variables
  CHECK_THROWS_AS(bad.load("(equivalence (= $A $B))"), EvalError);
  CHECK_THROWS_AS(bad.load("(rule (= $A $B) (= $B $A))"), EvalError);
  CHECK_THROWS_AS(bad.load("(define x 1)"), EvalError);
  CHECK_THROWS_WITH_AS(bad.load("(equivalence r4 $A $A)"), doctest::Contains("duplicate"), EvalError);
  CHECK_THROWS_AS(bad.load("(equivalence (= $A"), SyntaxError);
}

TEST_CASE("query forms") {
  auto s = QuerySpec::from_form(parse_one("(rejection-query (define a 1) (define b 2) (+ a b) (= a 1))"));
  CHECK(s.definitions.size() == 2);
  CHECK(print(s.query) == "(+ a b)");
  CHECK(print(s.condition) == "(= a 1)");
  CHECK_THROWS_AS(QuerySpec::from_form(parse_one("(rejection-query x)")), EvalError);
}
