#pragma once

#include "fvkit/ast.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fvkit {

// Seeded corpus generator for the differential-testing harness. All
// randomness flows from the constructor seed, so corpora are reproducible.
//
// Ring formulas follow the shape contract of the decomposition/tightening
// pipeline: Boolean combinations (depth <= 4) of atomic equations over at
// most two free variables and up to two non-nested quantified units, each
// quantifying a combination of a single atomic formula. That keeps every
// exists-step at two components, which the Boolean-side quantifier
// elimination needs to stay within its variable bound.
class FormulaGen {
public:
  explicit FormulaGen(std::uint64_t seed) : rng_(seed) {}

  // Free variables drawn from {x, y} (arity 1 limits to x).
  FormulaPtr ring_formula(int arity = 2, int max_quantifiers = 2);

  // Like ring_formula but quantified units may nest and bodies may mix
  // several atomics; suitable where only evaluation or k-sets are needed.
  FormulaPtr ring_formula_free(int arity = 2);

  // Boolean-algebra formulas in three oracle-friendly profiles:
  //   0: three free variables, quantifier free
  //   1: one free variable, one quantifier
  //   2: sentence, two quantifiers
  // Cardinality atoms use Atl[k] with k <= 3.
  FormulaPtr boolean_formula(int profile);

  // 1-4 fields drawn from {F2, F3, F4, F5, F7}, as prime powers.
  std::vector<int> random_product(int min_factors = 1, int max_factors = 4);

  std::mt19937_64& rng() { return rng_; }

private:
  std::mt19937_64 rng_;

  int pick(int n); // uniform in [0, n)
  TermPtr ring_term(const std::vector<std::string>& vars, int depth);
  FormulaPtr ring_atom(const std::vector<std::string>& vars);
  FormulaPtr quantified_unit(const std::vector<std::string>& free);
  FormulaPtr bool_term_atom(const std::vector<std::string>& vars);
  TermPtr bool_term(const std::vector<std::string>& vars, int depth);
  FormulaPtr combine_leaves(std::vector<FormulaPtr> leaves);
};

} // namespace fvkit
