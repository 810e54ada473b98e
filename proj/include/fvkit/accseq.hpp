#pragma once

#include "fvkit/ast.hpp"
#include "fvkit/eval.hpp"
#include "fvkit/structure.hpp"

#include <string>
#include <vector>

namespace fvkit {

// A Boolean-side formula over y1..ym together with m base-language component
// formulas. Over a product it is evaluated by plugging the index sets K_theta_i
// into the yi.
struct AcceptableSequence {
  FormulaPtr bool_formula;           // free variables among y1..ym
  std::vector<FormulaPtr> components; // ring flavor, shared free variables

  size_t size() const { return components.size(); }
};

// Name of the Boolean variable carrying component i (0-based): "y1", "y2", ...
std::string component_var(size_t i);

// Checks the sorting discipline: bool side only over y1..ym in the Boolean
// flavor, components free of Boolean symbols. Throws invalid_argument.
void check_acceptable(const AcceptableSequence& xi);

bool evaluate_acceptable(const ProductStructure& P, const AcceptableSequence& xi,
                         const ProductAssignment& asg);

std::string acceptable_to_json(const AcceptableSequence& xi);
AcceptableSequence acceptable_from_json(const std::string& text);

} // namespace fvkit
