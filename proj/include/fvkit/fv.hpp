#pragma once

#include "fvkit/accseq.hpp"

#include <map>
#include <vector>

namespace fvkit {

inline constexpr int kComponentBound = 12; // exists_step input limit (2^m output)

// <y1 = 1; phi> for atomic phi.
AcceptableSequence decompose_atomic(const FormulaPtr& phi);

AcceptableSequence combine_not(const AcceptableSequence& xi);

// op is Formula::Kind::And or Or. Component lists are concatenated and
// deduplicated up to bound-variable renaming; the second Boolean formula is
// rewritten onto the merged y-variables.
AcceptableSequence combine(Formula::Kind op, const AcceptableSequence& a,
                           const AcceptableSequence& b);

// The quantifier step: from a sequence for psi(x,t) to one for "E t. psi".
// Components become the 2^m satisfaction patterns th_S = E t (AND_{i in S}
// th_i AND AND_{i notin S} ~th_i); the Boolean side asks for disjoint w_S
// below z_S covering everything such that the old formula holds at
// y_i := join {w_S : i in S}.
AcceptableSequence exists_step(const AcceptableSequence& xi, const std::string& t);

// Full structural decomposition; forall is treated as ~E~.
AcceptableSequence decompose(const FormulaPtr& phi);

// Memoizing comparator: evaluates an acceptable sequence over one product,
// caching the Boolean-side verdict per K-set vector (the expensive part).
class AcceptableChecker {
public:
  AcceptableChecker(const ProductStructure& P, AcceptableSequence xi);
  bool operator()(const ProductAssignment& asg);

private:
  const ProductStructure& P_;
  AcceptableSequence xi_;
  std::map<std::vector<IndexSet>, bool> cache_;
};

} // namespace fvkit
