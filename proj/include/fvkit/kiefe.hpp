#pragma once

#include "fvkit/eval.hpp"
#include "fvkit/galois.hpp"
#include "fvkit/ba.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvkit {

// Signals that a caller-supplied pseudo-finite equivalence failed one of its
// spot checks.
struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Boolean combination of formulas "E t. P(xbar, t) = 0" with P an integer
// polynomial; bare polynomial equations are admitted as the degenerate case
// without the quantifier.
bool is_kiefe(const FormulaPtr& f);

struct KiefeFormula {
  FormulaPtr formula;
  explicit KiefeFormula(FormulaPtr f); // throws std::invalid_argument
};

// Cached table structure for the field of order q.
const FiniteStructure& field_structure(long long q);

// Truth of a ring formula in F_q under an assignment (sentence by default).
bool holds_in_field(long long q, const FormulaPtr& f, const Assignment& asg = {});

// The field-characterizing sentence: characteristic p, no root of
// t^q - t - 1 (excludes extensions of F_q up to an anomaly), a root of the
// canonical irreducible of matching degree, and - the strengthening - no root
// of the canonical irreducibles of the proper extension degrees up to M.
// Guarantee: among prime powers q' <= M, F_{q'} satisfies it iff q' = q.
KiefeFormula field_sentence(long long q, long long M = 64);

// The unstrengthened three-conjunct form; kept for the documented anomaly
// that F_8 satisfies the q=2 instance.
KiefeFormula field_sentence_unstrengthened(long long q);

// Kernel basis of the evaluation-at-a map on F_p-coefficient polynomials of
// degree <= q-1 in each variable, lifted to integer coefficients in {0..p-1}.
// Common zero set in F_q^n is the Frobenius orbit of a. With minimal=true a
// greedy subcover with the same zero set replaces the full basis. Variables
// default to x1..xn. Bound: q^n <= 4096.
std::vector<Polynomial> isolating_polynomials(long long q, const std::vector<int>& a,
                                              std::vector<std::string> vars = {},
                                              bool minimal = false);

std::vector<std::vector<int>> frobenius_orbit(long long q, const std::vector<int>& a);

// Quantifier-free equivalent of phi over F_q: disjunction over Frobenius-orbit
// representatives of phi's solution set of their isolating equations.
// The equivalence F_q |= forall xbar (phi <-> theta_q) is checked exhaustively
// before returning.
FormulaPtr theta_q(const FormulaPtr& phi, long long q);

// Assembly over the small-field case split: for prime powers q < N the
// matching field sentence selects theta_q; otherwise psi2 (asserted equivalent
// to phi in finite fields of size >= N) takes over. The psi2 assertion is spot
// checked on every prime power in [N, M]; failure throws ProviderError.
KiefeFormula kiefe_patch(const FormulaPtr& phi, const KiefeFormula& psi2,
                         long long N, long long M);

// Existential representation of K_{F=0} over products of fields: the witness
// idempotent is an associate of F(xbar). Set parameter interp::kSetVar.
FormulaPtr upsilon_field_atomic(const Polynomial& F);

// Representation of K_psi for a Kiefe formula, assembled from
// upsilon_field_atomic pieces so that the prenex shape of any formula using it
// positively under an existential prefix stays E*A*E*.
FormulaPtr upsilon_kiefe(const KiefeFormula& psi);

// The universal atom predicate (free variable "x").
FormulaPtr atom_formula();

// |{lambda : F_lambda |= psi(a[lambda])}| >= k, as a single E*A*E* formula.
FormulaPtr e_formula(const KiefeFormula& psi, int k);

// Per tighten component: a Kiefe sentence-with-parameters equivalent on the
// fields under test; identity when the component is already Kiefe.
using KiefeProvider = std::function<FormulaPtr(const FormulaPtr& component)>;

// psi2 := conjunction over prime powers q in [N, M] of (Psi_q -> theta_q);
// equivalent to the component on every field in the verified range.
KiefeProvider default_table_provider(long long N, long long M);

// tighten -> per-component Kiefe patch -> e_formula per cardinality atom.
// Output is a Boolean combination of E*A*E* formulas equivalent to phi on
// finite products of fields covered by the provider contract.
FormulaPtr reduce_to_eae(const FormulaPtr& phi, const KiefeProvider& provider,
                         long long N, long long M,
                         std::vector<QECertificate>* certs = nullptr);

} // namespace fvkit
