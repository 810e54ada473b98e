#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fvkit/parser.hpp"
#include "fvkit/polynomial.hpp"
#include "fvkit/prenex.hpp"
#include "fvkit/eval.hpp"
#include "fvkit/structure.hpp"
#include "fvkit/gen.hpp"

using namespace fvkit;

namespace {
FormulaPtr R(const std::string& s) { return parse_formula(s, ring_signature()); }
FormulaPtr B(const std::string& s) { return parse_formula(s, boolean_signature()); }
} // namespace

TEST_CASE("parse/render round trips") {
  CHECK(render_formula(R("x*x = y")) == "x*x = y");
  CHECK(render_formula(R("E t. (t*t = x & ~(t = 0)) -> x = 1")) ==
        "E t. t*t = x & ~(t = 0) -> x = 1");
  // Rendered text reparses to a structurally equal formula.
  for (const char* s : {"x*x = y", "E t. (t*t = x & ~(t = 0)) -> x = 1",
                        "A s. s + x = x + s", "x = 0 | (x = 1 <-> x*x = x)"}) {
    FormulaPtr f = R(s);
    CHECK(struct_equal(f, R(render_formula(f))));
  }
  FormulaPtr b = B("E y. (Atl[2](y) & Atl[2](comp(y)))");
  CHECK(struct_equal(b, B(render_formula(b))));
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(R("x + = 1"), SyntaxError);
  try {
    R("x + = 1");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 4);
  }
  try {
    R("Atl[2](x) = 0"); // Boolean-only predicate in ring flavor
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.position == 7);
  }
  try {
    B("meet(x)"); // arity error
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.position == 6);
  }
}

TEST_CASE("capture-avoiding substitution") {
  FormulaPtr f = R("E t. t = x");
  FormulaPtr g = substitute(f, {{"x", var("t")}});
  CHECK(render_formula(g) == "E t'. t' = t");
  CHECK(free_variables(g) == std::set<std::string>{"t"});
  CHECK(render_formula(normalize_bound(g)) == "E v0. v0 = t");
  // Alpha-equivalent formulas agree after normalization.
  CHECK(normalized_equal(R("E t. t = x"), R("E s. s = x")));
  CHECK_FALSE(normalized_equal(R("E t. t = x"), R("E t. x = t")));
}

TEST_CASE("polynomial normal form") {
  Polynomial x = Polynomial::variable("x");
  Polynomial one = Polynomial::constant(1);
  CHECK(render_polynomial((x + one) * (x - one)) == "x*x - 1");
  CHECK((x - x).is_zero());
  CHECK(render_polynomial(atomic_to_polynomial(R("x*x = x"))) == "x*x - x");
  CHECK(render_term(polynomial_to_term(atomic_to_polynomial(R("x*x = x")))) ==
        "x*x - x");
  // Normal form identifies syntactically different but equal terms.
  CHECK(term_to_polynomial(parse_term("(x + 1)*(x + 1)", ring_signature())) ==
        term_to_polynomial(parse_term("x*x + 2*x + 1", ring_signature())));
}

TEST_CASE("prenex form and quantifier shape") {
  FormulaPtr f = R("(E t. t*t = x) & (A s. s + x = x + s)");
  CHECK(render_formula(to_prenex(f)) ==
        "E t'. A s'. t'*t' = x & s' + x = x + s'");
  CHECK(quantifier_shape(f).word == "EA");
  CHECK(quantifier_shape(f).eae_combination);
  ShapeReport bad = quantifier_shape(R("A s. E t. A u. s + t = u"));
  CHECK(bad.word == "AEA");
  CHECK_FALSE(bad.eae_combination);
  ShapeReport qf = quantifier_shape(R("x = 0 | x = 1"));
  CHECK(qf.word == "");
  CHECK(qf.eae_combination);
  CHECK(word_matches_eae("EEAAE"));
  CHECK(word_matches_eae(""));
  CHECK_FALSE(word_matches_eae("AEAE"));
}

TEST_CASE("to_prenex preserves truth on random formulas") {
  FormulaGen gen(20240824);
  FiniteStructure F2 = finite_field(2);
  FiniteStructure F3 = finite_field(3);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen.ring_formula_free(2);
    FormulaPtr p = to_prenex(f);
    bool prenex_top = is_quantifier_free(p) || p->kind == Formula::Kind::Exists ||
                      p->kind == Formula::Kind::Forall;
    CHECK(prenex_top);
    for (const FiniteStructure* s : {&F2, &F3})
      for (int x = 0; x < s->size; ++x)
        for (int y = 0; y < s->size; ++y) {
          Assignment asg = {{"x", x}, {"y", y}};
          CHECK(evaluate(*s, f, asg) == evaluate(*s, p, asg));
        }
  }
}
