#pragma once

#include "fvkit/accseq.hpp"
#include "fvkit/polynomial.hpp"

#include <map>
#include <string>
#include <vector>

namespace fvkit {

// A ring formula with named parameter slots, instantiated by capture-avoiding
// substitution.
struct KitFormula {
  std::vector<std::string> params;
  FormulaPtr body;
  FormulaPtr operator()(const std::vector<TermPtr>& args) const;
};

// The idempotent interpretation of the power-set algebra inside a product of
// integral domains: membership x*x = x, equality, 0, 1, meet x*y = z, join
// (1-x)*(1-y) = 1-z, complement 1-x = y.
struct InterpretationKit {
  KitFormula in_b;  // (x)
  KitFormula eq;    // (x, y)
  KitFormula zero;  // (x)
  KitFormula one;   // (x)
  KitFormula meet;  // (x, y, z)
  KitFormula join;  // (x, y, z)
  KitFormula comp;  // (x, y)
};

InterpretationKit idempotent_kit();

// Existential prefix over a conjunction of atomic formulas.
bool is_positive_primitive(const FormulaPtr& f);

bool is_idempotent(const ProductStructure& P, const ProductElement& e);
IndexSet decode_idempotent(const ProductStructure& P, const ProductElement& e);
ProductElement indicator_idempotent(const ProductStructure& P, IndexSet s);

// Representation formulas Upsilon(xbar, y): satisfied exactly when y is the
// indicator idempotent of the index set K of the represented formula. The set
// parameter is the reserved variable below; it cannot clash with parsed
// variable names, and every combinator substitutes it away for its inputs, so
// finished definitions contain it only as their own set slot.
inline const std::string kSetVar = "@y";

// K_{F=0}: y idempotent, F*y = 0, and y is the largest such element.
FormulaPtr upsilon_atomic(const Polynomial& F);

// The and-not schema: K_{phi and not psi} from representations of K_phi and
// K_psi, via complement and meet in the interpreted algebra.
FormulaPtr upsilon_boolean(const FormulaPtr& up_phi, const FormulaPtr& up_psi);

// K_{exists z phi} from a representation of K_phi(xbar, z): the least
// idempotent containing K_phi(xbar, c) for every c.
FormulaPtr upsilon_exists(const FormulaPtr& up_phi, const std::string& z);

// Structural representation of any ring formula through the three builders,
// cached by normalized shape.
class RepresentationMap {
public:
  FormulaPtr represent(const FormulaPtr& phi);

private:
  std::map<std::string, FormulaPtr> cache_;
};

FormulaPtr represent(const FormulaPtr& phi);

// Generic atom predicate over the idempotent algebra (free variable "x"):
// nonzero idempotent below which every idempotent is it or zero.
FormulaPtr generic_atom_formula();

// One ring formula defining the acceptable-sequence predicate: components are
// represented, Boolean quantifiers are relativized to idempotents, Boolean
// symbols go through the kit, and Atl[k](t) asks for k distinct atoms below
// the translated term. atom_def, when given, replaces the generic atom
// predicate (free variable "x").
FormulaPtr define_acceptable(const AcceptableSequence& xi, const InterpretationKit& kit,
                             const FormulaPtr& atom_def = nullptr);

} // namespace fvkit
