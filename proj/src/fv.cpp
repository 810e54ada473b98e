#include "fvkit/fv.hpp"

#include <stdexcept>

namespace fvkit {

AcceptableSequence decompose_atomic(const FormulaPtr& phi) {
  if (!is_atomic(phi)) throw std::invalid_argument("decompose_atomic needs an atomic formula");
  AcceptableSequence xi;
  xi.bool_formula = eq(var(component_var(0)), cst(1));
  xi.components = {phi};
  return xi;
}

AcceptableSequence combine_not(const AcceptableSequence& xi) {
  return {lnot(xi.bool_formula), xi.components};
}

AcceptableSequence combine(Formula::Kind op, const AcceptableSequence& a,
                           const AcceptableSequence& b) {
  if (op != Formula::Kind::And && op != Formula::Kind::Or)
    throw std::invalid_argument("combine handles And/Or only");
  AcceptableSequence out;
  out.components = a.components;
  std::map<std::string, TermPtr> rename;
  for (size_t j = 0; j < b.components.size(); ++j) {
    size_t pos = out.components.size();
    for (size_t i = 0; i < out.components.size(); ++i)
      if (normalized_equal(out.components[i], b.components[j])) {
        pos = i;
        break;
      }
    if (pos == out.components.size()) out.components.push_back(b.components[j]);
    rename[component_var(j)] = var(component_var(pos));
  }
  FormulaPtr shifted = substitute(b.bool_formula, rename);
  out.bool_formula = op == Formula::Kind::And ? land(a.bool_formula, shifted)
                                              : lor(a.bool_formula, shifted);
  return out;
}

static std::string w_name(size_t k) { return "w" + std::to_string(k); }

AcceptableSequence exists_step(const AcceptableSequence& xi, const std::string& t) {
  size_t m = xi.components.size();
  if (m > kComponentBound)
    throw BoundExceeded("exists_step component bound exceeded: m = " + std::to_string(m) +
                        " > " + std::to_string(kComponentBound));
  size_t count = size_t{1} << m;

  AcceptableSequence out;
  out.components.reserve(count);
  for (size_t S = 0; S < count; ++S) {
    std::vector<FormulaPtr> pattern;
    for (size_t i = 0; i < m; ++i)
      pattern.push_back(S >> i & 1 ? xi.components[i] : lnot(xi.components[i]));
    out.components.push_back(exists(t, conj(pattern)));
  }

  // y_i := join of the w_S with i in S
  std::map<std::string, TermPtr> ysub;
  for (size_t i = 0; i < m; ++i) {
    TermPtr acc;
    for (size_t S = 0; S < count; ++S) {
      if (!(S >> i & 1)) continue;
      acc = acc ? bjoin(acc, var(w_name(S))) : var(w_name(S));
    }
    ysub[component_var(i)] = acc ? acc : cst(0);
  }
  FormulaPtr inner = substitute(xi.bool_formula, ysub);

  TermPtr all;
  for (size_t S = 0; S < count; ++S)
    all = all ? bjoin(all, var(w_name(S))) : var(w_name(S));
  FormulaPtr body = land(eq(all, cst(1)), inner);

  // Guards sit directly under their own quantifier so enumeration can prune.
  for (size_t S = count; S-- > 0;) {
    std::vector<FormulaPtr> guard;
    guard.push_back(eq(bmeet(var(w_name(S)), var(component_var(S))), var(w_name(S))));
    for (size_t j = 0; j < S; ++j)
      guard.push_back(eq(bmeet(var(w_name(S)), var(w_name(j))), cst(0)));
    body = exists(w_name(S), land(conj(guard), body));
  }
  out.bool_formula = body;
  return out;
}

AcceptableSequence decompose(const FormulaPtr& phi) {
  switch (phi->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Card:
      return decompose_atomic(phi);
    case Formula::Kind::Not:
      return combine_not(decompose(phi->sub[0]));
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return combine(phi->kind, decompose(phi->sub[0]), decompose(phi->sub[1]));
    case Formula::Kind::Implies:
      return combine(Formula::Kind::Or, combine_not(decompose(phi->sub[0])),
                     decompose(phi->sub[1]));
    case Formula::Kind::Iff: {
      AcceptableSequence a = decompose(phi->sub[0]);
      AcceptableSequence b = decompose(phi->sub[1]);
      return combine(Formula::Kind::Or, combine(Formula::Kind::And, a, b),
                     combine(Formula::Kind::And, combine_not(a), combine_not(b)));
    }
    case Formula::Kind::Exists: {
      if (!free_variables(phi->sub[0]).count(phi->bound)) return decompose(phi->sub[0]);
      return exists_step(decompose(phi->sub[0]), phi->bound);
    }
    case Formula::Kind::Forall: {
      FormulaPtr as_exists = exists(phi->bound, lnot(phi->sub[0]));
      return combine_not(decompose(as_exists));
    }
  }
  throw std::logic_error("unreachable");
}

AcceptableChecker::AcceptableChecker(const ProductStructure& P, AcceptableSequence xi)
    : P_(P), xi_(std::move(xi)) {}

bool AcceptableChecker::operator()(const ProductAssignment& asg) {
  std::vector<IndexSet> ks;
  ks.reserve(xi_.components.size());
  for (const auto& th : xi_.components) ks.push_back(k_set(P_, th, asg));
  auto it = cache_.find(ks);
  if (it != cache_.end()) return it->second;
  IndexSetAssignment ys;
  for (size_t i = 0; i < ks.size(); ++i) ys[component_var(i)] = ks[i];
  bool v = evaluate_powerset(static_cast<int>(P_.factors.size()), xi_.bool_formula, ys);
  cache_.emplace(std::move(ks), v);
  return v;
}

} // namespace fvkit
