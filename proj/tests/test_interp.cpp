#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fvkit/fv.hpp"
#include "fvkit/interp.hpp"
#include "fvkit/parser.hpp"

using namespace fvkit;

namespace {
FormulaPtr R(const std::string& s) { return parse_formula(s, ring_signature()); }
FormulaPtr B(const std::string& s) { return parse_formula(s, boolean_signature()); }

// All product elements b satisfying a representation formula at the set slot.
std::vector<ProductElement> satisfying_sets(const ProductStructure& P,
                                            const FormulaPtr& up,
                                            ProductAssignment asg) {
  std::vector<ProductElement> out;
  for (const auto& b : P.universe()) {
    asg[kSetVar] = b;
    if (evaluate_product(P, up, asg)) out.push_back(b);
  }
  return out;
}
} // namespace

TEST_CASE("kit formulas are positive primitive") {
  InterpretationKit kit = idempotent_kit();
  for (const KitFormula* kf :
       {&kit.in_b, &kit.eq, &kit.zero, &kit.one, &kit.meet, &kit.join, &kit.comp})
    CHECK(is_positive_primitive(kf->body));
  // Membership is the idempotency equation.
  CHECK(struct_equal(kit.in_b({var("x")}), R("x*x = x")));
}

TEST_CASE("idempotents of a product code index sets") {
  ProductStructure P = field_product({2, 3});
  std::vector<ProductElement> idems;
  for (const auto& e : P.universe())
    if (is_idempotent(P, e)) idems.push_back(e);
  CHECK(idems == std::vector<ProductElement>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(decode_idempotent(P, {1, 0}) == IndexSet{1}); // {F2}
  for (IndexSet s = 0; s < 4; ++s)
    CHECK(decode_idempotent(P, indicator_idempotent(P, s)) == s);
}

TEST_CASE("upsilon_atomic represents K-sets uniquely") {
  ProductStructure P = field_product({2, 3});
  FormulaPtr up = upsilon_atomic(Polynomial::variable("x")); // K_{x = 0}
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    auto sats = satisfying_sets(P, up, asg);
    REQUIRE(sats.size() == 1); // unique witness
    CHECK(decode_idempotent(P, sats[0]) == k_set(P, R("x = 0"), asg));
  }
  // Frozen instance: x = (1,0) has K = {F3}, indicator (0,1).
  auto sats = satisfying_sets(P, up, {{"x", {1, 0}}});
  REQUIRE(sats.size() == 1);
  CHECK(sats[0] == ProductElement{0, 1});
  // Tautology 0 = 0 is represented by 1; contradiction 1 = 0 by 0.
  auto taut = satisfying_sets(P, upsilon_atomic(Polynomial()), {});
  REQUIRE(taut.size() == 1);
  CHECK(taut[0] == P.constant(1));
  auto contra = satisfying_sets(P, upsilon_atomic(Polynomial::constant(1)), {});
  REQUIRE(contra.size() == 1);
  CHECK(contra[0] == P.constant(0));
}

TEST_CASE("boolean and exists combinators") {
  ProductStructure P = field_product({2, 3});
  FormulaPtr up_taut = upsilon_atomic(Polynomial());
  FormulaPtr up_x = upsilon_atomic(Polynomial::variable("x"));
  // K_{~ (x=0)} via the and-not schema with a tautology left side.
  FormulaPtr up_not = upsilon_boolean(up_taut, up_x);
  IndexSet full = (IndexSet{1} << P.arity()) - 1;
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    auto sats = satisfying_sets(P, up_not, asg);
    REQUIRE(sats.size() == 1);
    CHECK(decode_idempotent(P, sats[0]) == (full & ~k_set(P, R("x = 0"), asg)));
  }
  // K_{E z. x*z = 1}: units at every index where x is a unit.
  Polynomial inv = Polynomial::variable("x") * Polynomial::variable("z") -
                   Polynomial::constant(1);
  FormulaPtr up_ex = upsilon_exists(upsilon_atomic(inv), "z");
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    auto sats = satisfying_sets(P, up_ex, asg);
    REQUIRE(sats.size() == 1);
    CHECK(decode_idempotent(P, sats[0]) ==
          k_set(P, R("E z. x*z = 1"), asg));
  }
  // A vacuous quantifier changes nothing.
  FormulaPtr up_vac = upsilon_exists(up_x, "z");
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    auto sats = satisfying_sets(P, up_vac, asg);
    REQUIRE(sats.size() == 1);
    CHECK(decode_idempotent(P, sats[0]) == k_set(P, R("x = 0"), asg));
  }
}

TEST_CASE("represent handles full formulas") {
  ProductStructure P = field_product({2, 3});
  for (const char* s : {"x = 0", "~(x = 0)", "x*x = x & x + 1 = 1",
                        "E z. x*z = 1", "A z. z*x = z*x", "z = z"}) {
    FormulaPtr phi = R(s);
    FormulaPtr up = represent(phi);
    for (const auto& a : P.universe()) {
      ProductAssignment asg;
      for (const auto& v : free_variables(phi)) asg[v] = a;
      auto sats = satisfying_sets(P, up, asg);
      REQUIRE(sats.size() == 1);
      CHECK(decode_idempotent(P, sats[0]) == k_set(P, phi, asg));
    }
  }
}

TEST_CASE("generic atoms are the minimal idempotents") {
  ProductStructure P = field_product({2, 3, 5});
  FormulaPtr atom = generic_atom_formula();
  for (const auto& e : P.universe()) {
    bool is_atom = evaluate_product(P, atom, {{"x", e}});
    bool expected = is_idempotent(P, e) &&
                    __builtin_popcountll(decode_idempotent(P, e)) == 1;
    CHECK(is_atom == expected);
  }
}

TEST_CASE("define_acceptable") {
  InterpretationKit kit = idempotent_kit();
  // <y1 = 1; phi> defines phi itself.
  for (const char* s : {"x = 0", "E t. x*t = 1"}) {
    FormulaPtr phi = R(s);
    AcceptableSequence xi = decompose(phi);
    FormulaPtr delta = define_acceptable(xi, kit);
    ProductStructure P = field_product({2, 3});
    for (const auto& a : P.universe()) {
      ProductAssignment asg = {{"x", a}};
      CHECK(evaluate_product(P, delta, asg) == evaluate_product(P, phi, asg));
    }
  }
  // Counting: <Atl[2](y1); x = 0> holds iff x vanishes at two indices.
  AcceptableSequence count{B("Atl[2](y1)"), {R("x = 0")}};
  FormulaPtr delta = define_acceptable(count, kit);
  ProductStructure P3 = field_product({2, 3, 5});
  for (const auto& a : P3.universe()) {
    ProductAssignment asg = {{"x", a}};
    int zeros = (a[0] == 0) + (a[1] == 0) + (a[2] == 0);
    CHECK(evaluate_product(P3, delta, asg) == (zeros >= 2));
  }
  // A tautology decomposes to an everywhere-true definition.
  FormulaPtr taut = define_acceptable(decompose(R("0 = 0")), kit);
  ProductStructure P2 = field_product({2, 3});
  CHECK(evaluate_product(P2, taut, {}));
}
