#include "fvkit/gen.hpp"

#include <algorithm>

namespace fvkit {

int FormulaGen::pick(int n) {
  return static_cast<int>(rng_() % static_cast<std::uint64_t>(n));
}

TermPtr FormulaGen::ring_term(const std::vector<std::string>& vars, int depth) {
  int choice = pick(depth > 0 ? 6 : 4);
  switch (choice) {
    case 0:
    case 1:
      return var(vars[pick(static_cast<int>(vars.size()))]);
    case 2:
      return cst(pick(3));
    case 3:
      return var(vars[pick(static_cast<int>(vars.size()))]);
    case 4:
      return radd(ring_term(vars, depth - 1), ring_term(vars, depth - 1));
    default:
      return rmul(ring_term(vars, depth - 1), ring_term(vars, depth - 1));
  }
}

FormulaPtr FormulaGen::ring_atom(const std::vector<std::string>& vars) {
  return eq(ring_term(vars, 2), ring_term(vars, 1));
}

FormulaPtr FormulaGen::quantified_unit(const std::vector<std::string>& free) {
  std::vector<std::string> vars = free;
  vars.push_back("t");
  // One atomic involving the bound variable, under a small combination.
  FormulaPtr theta;
  do {
    theta = ring_atom(vars);
  } while (!free_variables(theta).count("t"));
  FormulaPtr body = pick(3) == 0 ? lnot(theta) : theta;
  return pick(4) == 0 ? forall("t", body) : exists("t", body);
}

FormulaPtr FormulaGen::combine_leaves(std::vector<FormulaPtr> leaves) {
  std::shuffle(leaves.begin(), leaves.end(), rng_);
  FormulaPtr out = leaves.back();
  leaves.pop_back();
  while (!leaves.empty()) {
    FormulaPtr next = leaves.back();
    leaves.pop_back();
    if (pick(5) == 0) next = lnot(next);
    switch (pick(5)) {
      case 0: out = land(out, next); break;
      case 1: out = lor(out, next); break;
      case 2: out = limplies(next, out); break;
      case 3: out = liff(out, next); break;
      default: out = lor(lnot(out), next); break;
    }
  }
  if (pick(6) == 0) out = lnot(out);
  return out;
}

FormulaPtr FormulaGen::ring_formula(int arity, int max_quantifiers) {
  std::vector<std::string> free = {"x"};
  if (arity >= 2) free.push_back("y");
  int r = pick(100);
  int quants = r < 45 || max_quantifiers < 1 ? 0
               : r < 85 || max_quantifiers < 2 ? 1
                                               : 2;
  int atoms = 1 + pick(3);
  std::vector<FormulaPtr> leaves;
  for (int i = 0; i < quants; ++i) leaves.push_back(quantified_unit(free));
  for (int i = 0; i < atoms; ++i) leaves.push_back(ring_atom(free));
  return combine_leaves(std::move(leaves));
}

FormulaPtr FormulaGen::ring_formula_free(int arity) {
  std::vector<std::string> free = {"x"};
  if (arity >= 2) free.push_back("y");
  std::vector<FormulaPtr> leaves;
  int atoms = 1 + pick(2);
  for (int i = 0; i < atoms; ++i) leaves.push_back(ring_atom(free));
  if (pick(3) != 0) {
    std::vector<std::string> inner = free;
    inner.push_back("t");
    std::vector<FormulaPtr> body = {ring_atom(inner)};
    if (pick(2)) body.push_back(ring_atom(inner));
    FormulaPtr unit = combine_leaves(std::move(body));
    unit = pick(3) == 0 ? forall("t", unit) : exists("t", unit);
    if (pick(4) == 0) {
      // one nested layer
      std::vector<std::string> outer = free;
      outer.push_back("s");
      unit = exists("s", land(eq(radd(var("s"), var("x")),
                                 ring_term(outer, 1)),
                              unit));
    }
    leaves.push_back(unit);
  }
  return combine_leaves(std::move(leaves));
}

TermPtr FormulaGen::bool_term(const std::vector<std::string>& vars, int depth) {
  int choice = pick(depth > 0 ? 7 : 4);
  switch (choice) {
    case 0:
    case 1:
    case 2:
      return var(vars[pick(static_cast<int>(vars.size()))]);
    case 3:
      return cst(pick(2));
    case 4:
      return bmeet(bool_term(vars, depth - 1), bool_term(vars, depth - 1));
    case 5:
      return bjoin(bool_term(vars, depth - 1), bool_term(vars, depth - 1));
    default:
      return bcomp(bool_term(vars, depth - 1));
  }
}

FormulaPtr FormulaGen::bool_term_atom(const std::vector<std::string>& vars) {
  if (pick(2)) return atcard(1 + pick(3), bool_term(vars, 2));
  return eq(bool_term(vars, 2), bool_term(vars, 1));
}

FormulaPtr FormulaGen::boolean_formula(int profile) {
  auto leaves_over = [&](const std::vector<std::string>& vars, int n) {
    std::vector<FormulaPtr> out;
    for (int i = 0; i < n; ++i) out.push_back(bool_term_atom(vars));
    return out;
  };
  switch (profile) {
    case 0:
      return combine_leaves(leaves_over({"z1", "z2", "z3"}, 2 + pick(3)));
    case 1: {
      FormulaPtr body = combine_leaves(leaves_over({"z1", "u"}, 1 + pick(2)));
      FormulaPtr q = pick(2) ? exists("u", body) : forall("u", body);
      std::vector<FormulaPtr> top = {q};
      if (pick(2)) top.push_back(bool_term_atom({"z1"}));
      return combine_leaves(std::move(top));
    }
    default: {
      FormulaPtr inner = combine_leaves(leaves_over({"u", "v"}, 1 + pick(2)));
      FormulaPtr qin = pick(2) ? exists("v", inner) : forall("v", inner);
      std::vector<FormulaPtr> mid = {qin};
      if (pick(2)) mid.push_back(bool_term_atom({"u"}));
      FormulaPtr body = combine_leaves(std::move(mid));
      return pick(2) ? exists("u", body) : forall("u", body);
    }
  }
}

std::vector<int> FormulaGen::random_product(int min_factors, int max_factors) {
  static const int pool[] = {2, 3, 4, 5, 7};
  int n = min_factors + pick(max_factors - min_factors + 1);
  std::vector<int> qs;
  for (int i = 0; i < n; ++i) qs.push_back(pool[pick(5)]);
  return qs;
}

} // namespace fvkit
