#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fvkit/ba.hpp"
#include "fvkit/eval.hpp"
#include "fvkit/gen.hpp"
#include "fvkit/parser.hpp"

using namespace fvkit;

namespace {
FormulaPtr R(const std::string& s) { return parse_formula(s, ring_signature()); }
FormulaPtr B(const std::string& s) { return parse_formula(s, boolean_signature()); }
} // namespace

TEST_CASE("oracle verdicts") {
  CHECK(infinite_ba_models(B("Atl[1](1)")));
  CHECK(infinite_ba_models(B("y = y")));
  CHECK(infinite_ba_models(B("A y. join(y, comp(y)) = 1")));
  CHECK_FALSE(infinite_ba_models(B("Atl[2](z)")));
  BAVerdict v = infinite_ba_valid(B("Atl[2](z)"));
  CHECK(v.satisfiable);
  CHECK_FALSE(infinite_ba_valid(B("~(y = y)")).satisfiable);
}

TEST_CASE("finite/infinite divergence witness") {
  FormulaPtr split = B("E y. (Atl[2](y) & Atl[2](comp(y)))");
  CHECK(infinite_ba_models(split));            // valid over infinite atomic BAs
  CHECK_FALSE(evaluate_powerset(3, split, {})); // but false in the 3-element power set
}

TEST_CASE("quantifier elimination with certificates") {
  FormulaPtr phi = B("E y. (Atl[2](y) & meet(y, z) = y)");
  std::vector<QECertificate> certs;
  FormulaPtr out = ba_eliminate_quantifiers(phi, &certs);
  CHECK(is_quantifier_free(out));
  CHECK(render_formula(out) == "Atl[2](z) & 0 = 0");
  REQUIRE(certs.size() == 1);
  CHECK(certs[0].passed);
  CHECK(infinite_ba_models(liff(phi, out)));
  // Quantifier-free input is returned unchanged.
  FormulaPtr qf = B("Atl[1](z) | z = 0");
  CHECK(struct_equal(ba_eliminate_quantifiers(qf), qf));
  // A trivially witnessed quantifier eliminates to a tautology.
  CHECK(infinite_ba_models(ba_eliminate_quantifiers(B("E y. y = z"))));
}

TEST_CASE("oracle agrees with finite power sets on quantifier-free formulas") {
  for (const char* s : {"Atl[2](z) & Atl[1](comp(z))", "join(z, comp(z)) = 1",
                        "Atl[2](join(z, u)) -> Atl[1](z) | Atl[1](u)"}) {
    FormulaPtr f = B(s);
    int b = std::max(1, max_card_index(f));
    bool oracle_valid = infinite_ba_valid(f).valid;
    for (int n = b + 1; n <= b + 3; ++n) {
      bool finite_valid = true;
      std::set<std::string> fv = free_variables(f);
      std::vector<std::string> vars(fv.begin(), fv.end());
      for (IndexSet z = 0; z < (IndexSet{1} << (n * vars.size())); ++z) {
        IndexSetAssignment asg;
        for (size_t i = 0; i < vars.size(); ++i)
          asg[vars[i]] = (z >> (n * i)) & ((IndexSet{1} << n) - 1);
        if (!evaluate_powerset(n, f, asg)) { finite_valid = false; break; }
      }
      CHECK(oracle_valid == finite_valid);
    }
  }
}

TEST_CASE("state budget guard") {
  FormulaPtr wide = B("Atl[1](z1) & Atl[1](z2) & Atl[1](z3) & Atl[1](z4)");
  CHECK_THROWS_AS(infinite_ba_valid(wide, 10), BoundExceeded);
}

TEST_CASE("tight shape and absorb_and_strip") {
  CHECK(is_tight_shape(B("Atl[1](y1) & ~(Atl[3](y2))")));
  CHECK_FALSE(is_tight_shape(B("y1 = y2")));
  CHECK_FALSE(is_tight_shape(B("Atl[1](meet(y1, y2))")));
  CHECK_FALSE(is_tight_shape(B("E y. Atl[1](y)")));

  TightDecomposition eqcase = absorb_and_strip(B("y1 = y2"), {R("x = 0"), R("x = 1")});
  CHECK(render_formula(eqcase.sigma) == "~(Atl[1](y1))");
  REQUIRE(eqcase.components.size() == 1);
  CHECK(render_formula(eqcase.components[0]) ==
        "x = 0 & ~(x = 1) | x = 1 & ~(x = 0)");
  CHECK(is_tight_shape(eqcase.sigma));

  TightDecomposition mt =
      absorb_and_strip(B("Atl[1](meet(y1, comp(y2)))"), {R("x = 0"), R("x = 1")});
  CHECK(render_formula(mt.sigma) == "Atl[1](y1)");
  CHECK(render_formula(mt.components[0]) == "x = 0 & ~(x = 1)");

  TightDecomposition c3 = absorb_and_strip(B("Atl[3](1)"), {});
  CHECK(render_formula(c3.sigma) == "Atl[3](y1)");
  ProductStructure P = field_product({2, 3, 5});
  for (const auto& a : P.universe()) // tautology component holds at >= 3 indices
    CHECK(evaluate_tight(P, c3, {{"x", a}}));
}

TEST_CASE("tighten") {
  std::vector<QECertificate> certs;
  TightDecomposition td = tighten(R("E t. x*t = 1"), &certs);
  CHECK(render_formula(td.sigma) ==
        "~(Atl[1](y3)) & (~(Atl[1](y2)) & ~(Atl[1](y1)))");
  CHECK(td.components.size() == 3);
  CHECK(is_tight_shape(td.sigma));
  CHECK(!certs.empty());
  for (const auto& c : certs) CHECK(c.passed);
  auto atoms = e_set_atoms(td);
  REQUIRE(atoms.size() == 3);
  CHECK(atoms[0] == std::pair<size_t, int>{2, 1});
  CHECK(atoms[1] == std::pair<size_t, int>{1, 1});
  CHECK(atoms[2] == std::pair<size_t, int>{0, 1});
  // Count semantics matches product truth for this formula.
  ProductStructure P = field_product({2, 3});
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    CHECK(evaluate_tight(P, td, asg) ==
          evaluate_product(P, R("E t. x*t = 1"), asg));
  }
  // Tautologies tighten to a decomposition that holds everywhere.
  TightDecomposition taut = tighten(R("A t. t*x = t*x"));
  CHECK(is_tight_shape(taut.sigma));
  for (const auto& a : P.universe())
    CHECK(evaluate_tight(P, taut, {{"x", a}}));
}

TEST_CASE("tighten corpus keeps the shape contract") {
  FormulaGen gen(99);
  for (int i = 0; i < 10; ++i) {
    std::vector<QECertificate> certs;
    TightDecomposition td = tighten(gen.ring_formula(), &certs);
    CHECK(is_tight_shape(td.sigma));
    for (const auto& c : certs) CHECK(c.passed);
  }
}
