#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fvkit/gen.hpp"
#include "fvkit/interp.hpp"
#include "fvkit/kiefe.hpp"
#include "fvkit/parser.hpp"
#include "fvkit/prenex.hpp"

using namespace fvkit;

namespace {
FormulaPtr R(const std::string& s) { return parse_formula(s, ring_signature()); }
} // namespace

TEST_CASE("canonical irreducibles") {
  CHECK(irreducible_coeffs(2, 3) == std::vector<int>{1, 1, 0, 1}); // t^3 + t + 1
  CHECK(irreducible_coeffs(3, 2) == std::vector<int>{1, 0, 1});    // t^2 + 1
  CHECK(irreducible_coeffs(2, 1) == std::vector<int>{0, 1});       // t
}

TEST_CASE("Kiefe syntactic class") {
  CHECK(is_kiefe(R("E t. x*t + 1 = 0")));
  CHECK(is_kiefe(R("x = 0 | ~(E t. t*t = x)")));
  CHECK(is_kiefe(R("x*x + 1 = 0")));
  CHECK_FALSE(is_kiefe(R("E t. E s. t*s = x")));
  CHECK_FALSE(is_kiefe(R("E t. (t = x | t = 1)")));
  CHECK_FALSE(is_kiefe(R("A t. t*x = t")));
  CHECK_NOTHROW(KiefeFormula(R("E t. x*t + 1 = 0")));
  CHECK_THROWS_AS(KiefeFormula(R("A t. t*x = t")), std::invalid_argument);
}

TEST_CASE("field sentences and the extension anomaly") {
  // The three-conjunct sentence for q=2 is satisfied by F_8 as well.
  KiefeFormula basic = field_sentence_unstrengthened(2);
  CHECK(holds_in_field(2, basic.formula));
  CHECK_FALSE(holds_in_field(4, basic.formula));
  CHECK(holds_in_field(8, basic.formula)); // the anomaly
  // The strengthened sentence excludes every proper extension up to M.
  KiefeFormula strong = field_sentence(2, 16);
  CHECK(holds_in_field(2, strong.formula));
  CHECK_FALSE(holds_in_field(4, strong.formula));
  CHECK_FALSE(holds_in_field(8, strong.formula));
  CHECK_FALSE(holds_in_field(16, strong.formula));
  // Exactness sample for q = 4.
  KiefeFormula four = field_sentence(4, 16);
  for (long long q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16})
    CHECK(holds_in_field(q, four.formula) == (q == 4));
}

TEST_CASE("isolating polynomials") {
  // In F_5, the orbit of 3 is {3}; the minimal cover is the single linear poly.
  auto iso = isolating_polynomials(5, {3}, {}, true);
  REQUIRE(iso.size() == 1);
  CHECK(render_polynomial(iso[0]) == "x1 + 2");
  CHECK(frobenius_orbit(5, {3}) == std::vector<std::vector<int>>{{3}});
  // In F_4, the generator's orbit is {g, g+1}, isolated by x^2 + x + 1.
  CHECK(frobenius_orbit(4, {2}) == std::vector<std::vector<int>>{{2}, {3}});
  auto iso4 = isolating_polynomials(4, {2}, {}, true);
  REQUIRE(iso4.size() == 1);
  CHECK(render_polynomial(iso4[0]) == "x1*x1 + x1 + 1");
  // The full kernel basis cuts out exactly the orbit.
  GaloisField gf(4);
  for (bool minimal : {false, true}) {
    auto polys = isolating_polynomials(4, {2}, {"x1"}, minimal);
    for (int a = 0; a < 4; ++a) {
      bool all_zero = true;
      for (const auto& p : polys)
        if (gf.eval(p, {{"x1", a}}) != 0) all_zero = false;
      CHECK(all_zero == (a == 2 || a == 3));
    }
  }
  // A pair in F_2^2.
  auto iso2 = isolating_polynomials(2, {0, 1});
  GaloisField f2(2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      bool all_zero = true;
      for (const auto& p : iso2)
        if (f2.eval(p, {{"x1", a}, {"x2", b}}) != 0) all_zero = false;
      CHECK(all_zero == (a == 0 && b == 1));
    }
}

TEST_CASE("theta_q") {
  FormulaPtr sq = R("E t. t*t = x1");
  FormulaPtr th5 = theta_q(sq, 5);
  CHECK(is_quantifier_free(th5));
  CHECK(render_formula(th5) == "x1 = 0 | x1 + 4 = 0 | x1 + 1 = 0");
  for (int a = 0; a < 5; ++a)
    CHECK(holds_in_field(5, th5, {{"x1", a}}) ==
          holds_in_field(5, sq, {{"x1", a}}));
  // A tautology covers the whole field, orbit by orbit.
  CHECK(render_formula(theta_q(R("x1 = x1"), 4)) ==
        "x1 = 0 | x1 + 1 = 0 | x1*x1 + x1 + 1 = 0");
  // Unsatisfiable input gives the canonical false formula.
  CHECK(render_formula(theta_q(R("~(x1 = x1)"), 3)) == "~(0 = 0)");
}

TEST_CASE("kiefe_patch") {
  FormulaPtr phi = R("E t. t*t = x");
  // Identity provider: psi2 = phi itself is correct on every field.
  KiefeFormula patched = kiefe_patch(phi, KiefeFormula(phi), 3, 11);
  for (long long q : {2, 3, 4, 5, 7, 8, 9, 11})
    for (int a = 0; a < (int)q; ++a)
      CHECK(holds_in_field(q, patched.formula, {{"x", a}}) ==
            holds_in_field(q, phi, {{"x", a}}));
  // A wrong psi2 fails the spot checks in [N, M].
  KiefeFormula wrong(lnot(exists("t", eq(cst(0), cst(0)))));
  CHECK_THROWS_AS(kiefe_patch(phi, wrong, 3, 11), ProviderError);
  CHECK(is_kiefe(patched.formula));
}

TEST_CASE("field-atomic representation") {
  ProductStructure P = field_product({2, 3});
  FormulaPtr up = upsilon_field_atomic(Polynomial::variable("x"));
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    int hits = 0;
    ProductElement found;
    for (const auto& b : P.universe()) {
      asg[kSetVar] = b;
      if (evaluate_product(P, up, asg)) { ++hits; found = b; }
    }
    asg.erase(kSetVar);
    REQUIRE(hits == 1);
    CHECK(decode_idempotent(P, found) == k_set(P, R("x = 0"), asg));
  }
}

TEST_CASE("upsilon_kiefe matches the general representation") {
  ProductStructure P = field_product({2, 3});
  KiefeFormula psi(R("E t. x*t + 1 = 0"));
  FormulaPtr up = upsilon_kiefe(psi);
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    int hits = 0;
    ProductElement found;
    for (const auto& b : P.universe()) {
      asg[kSetVar] = b;
      if (evaluate_product(P, up, asg)) { ++hits; found = b; }
    }
    asg.erase(kSetVar);
    REQUIRE(hits == 1);
    CHECK(decode_idempotent(P, found) == k_set(P, psi.formula, asg));
  }
}

TEST_CASE("e_formula counts satisfying indices in E*A*E* shape") {
  KiefeFormula psi(R("E t. x*t = 1"));
  ProductStructure P = field_product({2, 3, 5});
  for (int k = 1; k <= 3; ++k) {
    FormulaPtr ef = e_formula(psi, k);
    ShapeReport shape = quantifier_shape(ef);
    CHECK(shape.eae_combination);
    CHECK(word_matches_eae(shape.word));
    for (const auto& a : P.universe()) {
      ProductAssignment asg = {{"x", a}};
      int count = __builtin_popcountll(k_set(P, psi.formula, asg));
      CHECK(evaluate_product(P, ef, asg) == (count >= k));
    }
  }
  CHECK(quantifier_shape(e_formula(psi, 2)).word == "EEEEEAAAE");
}

TEST_CASE("reduce_to_eae") {
  KiefeProvider provider = default_table_provider(3, 11);
  ProductStructure P = field_product({2, 3});
  for (const char* s : {"x = 0", "E t. x*t = 1", "0 = 0"}) {
    FormulaPtr phi = R(s);
    std::vector<QECertificate> certs;
    FormulaPtr red = reduce_to_eae(phi, provider, 3, 11, &certs);
    for (const auto& c : certs) CHECK(c.passed);
    CHECK(quantifier_shape(red).eae_combination);
    for (const auto& a : P.universe()) {
      ProductAssignment asg;
      for (const auto& v : free_variables(phi)) asg[v] = a;
      CHECK(evaluate_product(P, red, asg) == evaluate_product(P, phi, asg));
    }
  }
  // A provider returning a wrong equivalence is rejected.
  KiefeProvider bad = [](const FormulaPtr&) {
    return lnot(exists("t", eq(cst(0), cst(0))));
  };
  CHECK_THROWS_AS(reduce_to_eae(R("E t. x*t = 1"), bad, 3, 11), ProviderError);
}
