#pragma once

#include "fvkit/accseq.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fvkit {

// Exact decision oracle for the first-order theory of infinite atomic Boolean
// algebras in the language {0,1,meet,join,comp,=,Atl[k]}.
//
// Assignments are abstracted as CardinalityStates: for the r variables in
// scope, each of the 2^r minterms carries an abstract cardinality in
// {0,...,B,TOP}, where B is the largest Atl index in the input (minimum 1) and
// TOP stands for an infinite cardinality. An existential set quantifier splits
// every minterm: a finite count c into (c1, c - c1), an infinite one into
// (a, TOP) or (TOP, a). Admissible top-level states have at least one infinite
// minterm. Synthesis and certification share this abstraction.

struct BAVerdict {
  bool valid = false;
  bool satisfiable = false;
};

// Verdict over every admissible assignment of the free variables.
// Throws BoundExceeded when the state space is too large (the budget caps
// (B+2)^(2^r) top-level states).
BAVerdict infinite_ba_valid(const FormulaPtr& phi, long long state_budget = 4'000'000);

bool infinite_ba_models(const FormulaPtr& phi); // valid shorthand

// Quantifier elimination: innermost quantifiers are replaced bottom-up by
// formulas synthesized from the oracle's state tables. Output is quantifier
// free over {0,1,meet,join,comp,=,Atl}; quantifier-free input is returned
// unchanged.
FormulaPtr ba_eliminate_quantifiers(const FormulaPtr& phi,
                                    long long state_budget = 4'000'000);

struct QECertificate {
  FormulaPtr before; // the quantified subformula that was eliminated
  FormulaPtr after;  // its synthesized replacement
  bool passed = false;
};

FormulaPtr ba_eliminate_quantifiers(const FormulaPtr& phi,
                                    std::vector<QECertificate>* certs,
                                    long long state_budget = 4'000'000);

struct TightDecomposition {
  FormulaPtr sigma;                   // quantifier-free, equality-free, Atl-only
  std::vector<FormulaPtr> components; // base-language formulas
};

// True when f contains no quantifier, no equality, and no Boolean function
// symbol or constant: only Atl atoms on plain variables under connectives.
bool is_tight_shape(const FormulaPtr& f);

// Lemma-style symbol absorption: equalities are rewritten through
// ~Atl[1]((v1 meet comp(v2)) join (v2 meet comp(v1))), then every Boolean term
// under an Atl is replaced by a fresh variable whose component formula is the
// matching base-language combination of the thetas.
TightDecomposition absorb_and_strip(const FormulaPtr& sigma2,
                                    const std::vector<FormulaPtr>& thetas);

TightDecomposition tighten(const FormulaPtr& phi);
TightDecomposition tighten(const FormulaPtr& phi, std::vector<QECertificate>* certs);

// E-set atoms of a tight decomposition: (component index, k) for each
// Atl[k](y_i) occurrence, in traversal order.
std::vector<std::pair<size_t, int>> e_set_atoms(const TightDecomposition& td);

// Count semantics on a finite product: Atl[k](y_i) holds iff theta_i holds at
// >= k indices.
bool evaluate_tight(const ProductStructure& P, const TightDecomposition& td,
                    const ProductAssignment& asg);

std::string tight_to_json(const TightDecomposition& td);

} // namespace fvkit
