#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fvkit/fv.hpp"
#include "fvkit/gen.hpp"
#include "fvkit/parser.hpp"

using namespace fvkit;

namespace {
FormulaPtr R(const std::string& s) { return parse_formula(s, ring_signature()); }
FormulaPtr B(const std::string& s) { return parse_formula(s, boolean_signature()); }

bool differential(const ProductStructure& P, const FormulaPtr& f) {
  AcceptableSequence xi = decompose(f);
  check_acceptable(xi);
  AcceptableChecker chk(P, xi);
  std::set<std::string> fv = free_variables(f);
  std::vector<std::string> vars(fv.begin(), fv.end());
  std::vector<ProductElement> U = P.universe();
  std::vector<size_t> idx(vars.size(), 0);
  while (true) {
    ProductAssignment asg;
    for (size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = U[idx[i]];
    if (chk(asg) != evaluate_product(P, f, asg)) return false;
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++idx[i] < U.size()) break;
      idx[i] = 0;
    }
    if (i == vars.size()) break;
    if (vars.empty()) break;
  }
  return true;
}
} // namespace

TEST_CASE("decompose_atomic") {
  AcceptableSequence xi = decompose_atomic(R("x = 0"));
  CHECK(render_formula(xi.bool_formula) == "y1 = 1");
  CHECK(xi.size() == 1);
  CHECK(render_formula(xi.components[0]) == "x = 0");
  CHECK_THROWS_AS(decompose_atomic(R("x = 0 & x = 1")), std::invalid_argument);
  ProductStructure P = field_product({2, 3});
  CHECK(differential(P, R("x*x = x")));
}

TEST_CASE("combine and dedup") {
  AcceptableSequence a = decompose_atomic(R("x = 0"));
  AcceptableSequence n = combine_not(a);
  CHECK(render_formula(n.bool_formula) == "~(y1 = 1)");
  CHECK(n.size() == 1);
  AcceptableSequence both = combine(Formula::Kind::And, a, decompose_atomic(R("x = 0")));
  CHECK(both.size() == 1); // identical components merge
  AcceptableSequence two = combine(Formula::Kind::And, a, decompose_atomic(R("x = 1")));
  CHECK(two.size() == 2);
  ProductStructure P = field_product({2, 3, 5});
  CHECK(differential(P, R("x = 0 | x*x = 1")));
}

TEST_CASE("exists_step") {
  AcceptableSequence xi = decompose_atomic(R("x*t = 1"));
  AcceptableSequence ex = exists_step(xi, "t");
  CHECK(ex.size() == 2); // 2^m components exactly
  // Equivalent to the direct sequence <z = 1; E t th, E t ~th> everywhere.
  AcceptableSequence direct{B("y2 = 1"), {R("E t. ~(x*t = 1)"), R("E t. x*t = 1")}};
  ProductStructure P = field_product({2, 3});
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    CHECK(evaluate_acceptable(P, ex, asg) == evaluate_acceptable(P, direct, asg));
  }
  CHECK(differential(P, R("E t. x*t = 1")));
  // A t over a tautology body: true everywhere.
  ProductStructure P3 = field_product({2, 3, 5});
  AcceptableSequence taut = decompose(R("A t. t*x = t*x"));
  for (const auto& a : P3.universe())
    CHECK(evaluate_acceptable(P3, taut, {{"x", a}}));
}

TEST_CASE("decompose differential on fixed formulas") {
  ProductStructure P = field_product({2, 3, 5});
  for (const char* s :
       {"E t. x*t = 1", "x = 0 | ~(x*x = x)", "(E t. t*t = x) & x + 1 = x + 1",
        "(A t. t + x = x + t) & (E s. s*s = x)",
        "(x = 1 -> x*x = 1) <-> x = x"})
    CHECK(differential(P, R(s)));
}

TEST_CASE("K-set identities") {
  ProductStructure P = field_product({2, 3, 5});
  IndexSet full = (IndexSet{1} << P.arity()) - 1;
  FormulaPtr th1 = R("x*x = x");
  FormulaPtr th2 = R("x + 1 = 0");
  for (const auto& a : P.universe()) {
    ProductAssignment asg = {{"x", a}};
    IndexSet k1 = k_set(P, th1, asg), k2 = k_set(P, th2, asg);
    CHECK(k_set(P, lnot(th1), asg) == (full & ~k1));
    CHECK(k_set(P, land(th1, th2), asg) == (k1 & k2));
    CHECK(k_set(P, lor(th1, th2), asg) == (k1 | k2));
    // K_{E t th} is the union over instances.
    FormulaPtr open_th = R("x*t = t");
    IndexSet uni = 0;
    for (const auto& c : P.universe()) {
      ProductAssignment a2 = asg;
      a2["t"] = c;
      uni |= k_set(P, open_th, a2);
    }
    CHECK(k_set(P, exists("t", open_th), asg) == uni);
  }
}

TEST_CASE("component bound guard") {
  AcceptableSequence xi;
  std::vector<FormulaPtr> ys;
  for (int i = 0; i < kComponentBound + 1; ++i) {
    xi.components.push_back(eq(rmul(var("x"), var("t")), cst(i)));
    ys.push_back(eq(var(component_var(i)), cst(1)));
  }
  xi.bool_formula = conj(ys);
  CHECK_THROWS_AS(exists_step(xi, "t"), BoundExceeded);
}

TEST_CASE("well-sortedness of decompositions") {
  FormulaGen gen(7);
  for (int i = 0; i < 25; ++i) {
    AcceptableSequence xi = decompose(gen.ring_formula());
    CHECK_NOTHROW(check_acceptable(xi));
  }
}
