#pragma once

#include "fvkit/ast.hpp"

#include <string>

namespace fvkit {

// Rewrites -> and <-> into ~, &, |.
FormulaPtr eliminate_arrows(const FormulaPtr& f);

// Negation normal form (arrows eliminated, negations pushed to atoms).
FormulaPtr to_nnf(const FormulaPtr& f);

// Logically equivalent prenex form. Quantifiers from sibling subformulas are
// interleaved block-greedily so that e.g. forall/exists pairs from separate
// conjuncts merge into A*E* rather than alternating.
FormulaPtr to_prenex(const FormulaPtr& f);

struct ShapeReport {
  // Quantifier prefix word of to_prenex(f), 'E' for exists and 'A' for forall.
  std::string word;
  // True when f is a Boolean combination of formulas whose prenex prefixes
  // all match E*A*E* (empty blocks allowed).
  bool eae_combination;
};

ShapeReport quantifier_shape(const FormulaPtr& f);

bool word_matches_eae(const std::string& word);

} // namespace fvkit
