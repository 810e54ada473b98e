#pragma once

#include "fvkit/ast.hpp"
#include "fvkit/structure.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace fvkit {

using Assignment = std::map<std::string, int>;
using ProductAssignment = std::map<std::string, ProductElement>;
using IndexSetAssignment = std::map<std::string, IndexSet>;

inline constexpr long long kDefaultEnumBound = 1'000'000;

// Tarskian truth in one finite structure; quantifiers enumerate the universe.
bool evaluate(const FiniteStructure& s, const FormulaPtr& f, const Assignment& asg);

int evaluate_term(const FiniteStructure& s, const TermPtr& t, const Assignment& asg);

// Truth in the product structure. Quantifiers range over the full product
// universe; conjunction/disjunction short-circuit and closed subformulas are
// memoized per call, which keeps the deeply nested generated formulas feasible.
bool evaluate_product(const ProductStructure& P, const FormulaPtr& f,
                      const ProductAssignment& asg,
                      long long enum_bound = kDefaultEnumBound);

// K_theta: the positions where theta holds in the factor, under the
// coordinatewise projection of the assignment.
IndexSet k_set(const ProductStructure& P, const FormulaPtr& theta,
               const ProductAssignment& asg);

// Truth in the power-set algebra of num_labels positions: 0 is the empty set,
// 1 the full set, meet/join/comp are the set operations, Atl[k](t) means
// |t| >= k, and quantifiers enumerate all subsets.
bool evaluate_powerset(int num_labels, const FormulaPtr& phi,
                       const IndexSetAssignment& asg, int label_bound = 20);

IndexSet evaluate_powerset_term(int num_labels, const TermPtr& t,
                                const IndexSetAssignment& asg);

struct MixingWitness {
  PointTuple in_x;
  PointTuple out_x;
};

// Searches for a pair of n-tuples agreeing with the cylinder, one inside X and
// one outside. Exhaustive when the constrained search space fits the budget,
// otherwise seeded random sampling.
std::optional<MixingWitness> mixing_witness(
    const ProductStructure& P, int arity,
    const std::function<bool(const PointTuple&)>& member, const CylinderSpec& cyl,
    long long budget, std::uint64_t seed = 0);

} // namespace fvkit
