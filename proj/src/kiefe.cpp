#include "fvkit/kiefe.hpp"

#include "fvkit/fv.hpp"
#include "fvkit/interp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fvkit {

namespace {

bool is_kiefe_leaf(const Formula* f) {
  if (f->kind == Formula::Kind::Eq) return true;
  return f->kind == Formula::Kind::Exists &&
         f->sub[0]->kind == Formula::Kind::Eq;
}

bool is_kiefe_rec(const Formula* f) {
  if (is_kiefe_leaf(f)) return true;
  switch (f->kind) {
    case Formula::Kind::Not:
      return is_kiefe_rec(f->sub[0].get());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return is_kiefe_rec(f->sub[0].get()) && is_kiefe_rec(f->sub[1].get());
    default:
      return false;
  }
}

} // namespace

bool is_kiefe(const FormulaPtr& f) { return is_kiefe_rec(f.get()); }

KiefeFormula::KiefeFormula(FormulaPtr f) : formula(std::move(f)) {
  if (!formula || !is_kiefe(formula))
    throw std::invalid_argument(
        "not a Kiefe formula (Boolean combination of E t. P = 0)");
}

const FiniteStructure& field_structure(long long q) {
  static std::map<long long, FiniteStructure> cache;
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, finite_field(q)).first;
  return it->second;
}

bool holds_in_field(long long q, const FormulaPtr& f, const Assignment& asg) {
  return evaluate(field_structure(q), f, asg);
}

namespace {

Polynomial poly_pow(const Polynomial& base, long long e) {
  Polynomial out = Polynomial::constant(1);
  for (long long i = 0; i < e; ++i) out = out * base;
  return out;
}

FormulaPtr root_exists(const Polynomial& p) {
  return exists("t", polynomial_eq_zero(p));
}

FormulaPtr psi_core(long long q) {
  auto pp = prime_power(q);
  if (!pp) throw std::invalid_argument("q must be a prime power");
  auto [p, n] = *pp;
  Polynomial t = Polynomial::variable("t");
  std::vector<FormulaPtr> parts;
  parts.push_back(eq(cst(p), cst(0)));
  parts.push_back(lnot(root_exists(poly_pow(t, q) - t - Polynomial::constant(1))));
  parts.push_back(root_exists(irreducible_polynomial(p, n)));
  return conj(parts);
}

} // namespace

KiefeFormula field_sentence_unstrengthened(long long q) { return KiefeFormula(psi_core(q)); }

KiefeFormula field_sentence(long long q, long long M) {
  auto [p, n] = *prime_power(q);
  FormulaPtr out = psi_core(q);
  long long qj = q * q;
  for (int j = 2; qj <= M; ++j, qj *= q)
    out = land(out, lnot(root_exists(irreducible_polynomial(p, n * j))));
  return KiefeFormula(out);
}

std::vector<std::vector<int>> frobenius_orbit(long long q, const std::vector<int>& a) {
  GaloisField F(q);
  std::vector<std::vector<int>> orbit;
  std::vector<int> cur = a;
  do {
    orbit.push_back(cur);
    for (auto& c : cur) c = F.frobenius(c);
  } while (cur != a);
  return orbit;
}

std::vector<Polynomial> isolating_polynomials(long long q, const std::vector<int>& a,
                                              std::vector<std::string> vars,
                                              bool minimal) {
  auto pp = prime_power(q);
  if (!pp) throw std::invalid_argument("q must be a prime power");
  auto [p, d] = *pp;
  size_t r = a.size();
  if (vars.empty())
    for (size_t i = 0; i < r; ++i) vars.push_back("x" + std::to_string(i + 1));
  if (vars.size() != r) throw std::invalid_argument("variable/tuple length mismatch");

  long long D = 1;
  for (size_t i = 0; i < r; ++i) {
    D *= q;
    if (D > 4096) throw BoundExceeded("isolating_polynomials: q^n > 4096");
  }

  GaloisField F(q);

  // Column j is the monomial with exponent digits of j in base q; its value at
  // a is spread over d matrix rows as base-p digits.
  std::vector<std::vector<int>> mat(d, std::vector<int>(D));
  for (long long j = 0; j < D; ++j) {
    int val = F.from_int(1);
    long long rest = j;
    for (size_t i = 0; i < r; ++i) {
      int e = static_cast<int>(rest % q);
      rest /= q;
      val = F.mul(val, F.pow(a[i], e));
    }
    for (int row = 0; row < d; ++row) {
      mat[row][j] = val % p;
      val /= p;
    }
  }

  // Row-reduce over F_p.
  std::vector<long long> pivot_col;
  int row = 0;
  for (long long col = 0; col < D && row < d; ++col) {
    int sel = -1;
    for (int i = row; i < d; ++i)
      if (mat[i][col]) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(mat[sel], mat[row]);
    long long inv = 1;
    for (int v = 1; v < p; ++v)
      if (v * mat[row][col] % p == 1) { inv = v; break; }
    for (long long j = col; j < D; ++j) mat[row][j] = static_cast<int>(mat[row][j] * inv % p);
    for (int i = 0; i < d; ++i) {
      if (i == row || !mat[i][col]) continue;
      int f = mat[i][col];
      for (long long j = col; j < D; ++j)
        mat[i][j] = ((mat[i][j] - f * mat[row][j]) % p + p) % p;
    }
    pivot_col.push_back(col);
    ++row;
  }

  auto monomial_of = [&](long long j) {
    Monomial m;
    long long rest = j;
    for (size_t i = 0; i < r; ++i) {
      int e = static_cast<int>(rest % q);
      rest /= q;
      if (e) m.push_back({vars[i], e});
    }
    std::sort(m.begin(), m.end());
    return m;
  };

  std::vector<Polynomial> basis;
  std::set<long long> pivots(pivot_col.begin(), pivot_col.end());
  for (long long j = 0; j < D; ++j) {
    if (pivots.count(j)) continue;
    Polynomial poly;
    poly.set(monomial_of(j), 1);
    for (size_t i = 0; i < pivot_col.size(); ++i)
      if (mat[i][j]) poly.set(monomial_of(pivot_col[i]), (p - mat[i][j]) % p);
    if (!poly.is_zero()) basis.push_back(poly);
  }
  if (!minimal) return basis;

  // Greedy subcover: keep only polynomials that shrink the running zero set,
  // until it equals the Frobenius orbit.
  auto orbit = frobenius_orbit(q, a);
  std::set<std::vector<int>> target(orbit.begin(), orbit.end());
  std::vector<std::vector<int>> zero_set;
  {
    std::vector<int> tup(r, 0);
    for (long long j = 0; j < D; ++j) {
      long long rest = j;
      for (size_t i = 0; i < r; ++i) { tup[i] = static_cast<int>(rest % q); rest /= q; }
      zero_set.push_back(tup);
    }
  }
  auto value_at = [&](const Polynomial& poly, const std::vector<int>& tup) {
    std::map<std::string, int> asg;
    for (size_t i = 0; i < r; ++i) asg[vars[i]] = tup[i];
    return F.eval(poly, asg);
  };
  std::vector<Polynomial> chosen;
  for (const auto& poly : basis) {
    if (zero_set.size() == target.size()) break;
    std::vector<std::vector<int>> next;
    for (const auto& tup : zero_set)
      if (value_at(poly, tup) == 0) next.push_back(tup);
    if (next.size() < zero_set.size()) {
      chosen.push_back(poly);
      zero_set = std::move(next);
    }
  }
  if (zero_set.size() != target.size())
    throw std::logic_error("isolating subcover did not reach the orbit");
  return chosen;
}

namespace {

std::vector<std::string> sorted_free(const FormulaPtr& f) {
  auto s = free_variables(f);
  return {s.begin(), s.end()};
}

std::vector<std::vector<int>> all_tuples(long long q, size_t r) {
  std::vector<std::vector<int>> out;
  std::vector<int> tup(r, 0);
  long long total = 1;
  for (size_t i = 0; i < r; ++i) total *= q;
  for (long long j = 0; j < total; ++j) {
    long long rest = j;
    for (size_t i = 0; i < r; ++i) { tup[i] = static_cast<int>(rest % q); rest /= q; }
    out.push_back(tup);
  }
  return out;
}

Assignment to_assignment(const std::vector<std::string>& vars, const std::vector<int>& tup) {
  Assignment asg;
  for (size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = tup[i];
  return asg;
}

} // namespace

FormulaPtr theta_q(const FormulaPtr& phi, long long q) {
  std::vector<std::string> vars = sorted_free(phi);
  std::set<std::vector<int>> seen;
  std::vector<FormulaPtr> cases;
  for (const auto& tup : all_tuples(q, vars.size())) {
    if (seen.count(tup)) continue;
    if (!holds_in_field(q, phi, to_assignment(vars, tup))) continue;
    auto orbit = frobenius_orbit(q, tup);
    for (const auto& o : orbit) seen.insert(o);
    std::vector<int> rep = *std::min_element(orbit.begin(), orbit.end());
    std::vector<FormulaPtr> eqs;
    for (const auto& poly : isolating_polynomials(q, rep, vars, true))
      eqs.push_back(polynomial_eq_zero(poly));
    cases.push_back(conj(eqs));
  }
  FormulaPtr out = cases.empty() ? falsity() : disj(cases);
  for (const auto& tup : all_tuples(q, vars.size())) {
    Assignment asg = to_assignment(vars, tup);
    if (holds_in_field(q, phi, asg) != holds_in_field(q, out, asg))
      throw std::logic_error("theta_q equivalence check failed");
  }
  return out;
}

KiefeFormula kiefe_patch(const FormulaPtr& phi, const KiefeFormula& psi2,
                         long long N, long long M) {
  if (M < N) throw std::invalid_argument("kiefe_patch needs M >= N");
  std::vector<FormulaPtr> parts;
  FormulaPtr none = truth();
  for (int q : prime_powers_up_to(static_cast<int>(N - 1))) {
    FormulaPtr psi_q = field_sentence(q, M).formula;
    parts.push_back(limplies(psi_q, theta_q(phi, q)));
    none = land(none, lnot(psi_q));
  }
  parts.push_back(limplies(none, psi2.formula));
  KiefeFormula out{conj(parts)};

  std::vector<std::string> vars = sorted_free(phi);
  for (int q : prime_powers_up_to(static_cast<int>(M))) {
    if (q < N) continue; // theta_q verified its own equivalence above
    for (const auto& tup : all_tuples(q, vars.size())) {
      Assignment asg = to_assignment(vars, tup);
      if (holds_in_field(q, psi2.formula, asg) != holds_in_field(q, phi, asg))
        throw ProviderError("psi' differs from the component in F_" +
                            std::to_string(q));
    }
  }
  return out;
}

FormulaPtr upsilon_field_atomic(const Polynomial& F) {
  std::set<std::string> used;
  for (const auto& v : F.variables()) used.insert(v);
  used.insert(kSetVar);
  std::string zn = fresh_name("z", used);
  used.insert(zn);
  std::string un = fresh_name("u", used);
  used.insert(un);
  std::string vn = fresh_name("v", used);
  TermPtr z = var(zn), u = var(un), v = var(vn), y = var(kSetVar);
  // Guards precede the inner quantifiers they do not mention, so enumeration
  // prunes: z is pinned by y, then u by z, then v witnesses that u is a unit.
  FormulaPtr body = exists(
      zn, land(eq(y, rsub(cst(1), z)),
               land(eq(rmul(z, z), z),
                    exists(un, land(eq(rmul(u, polynomial_to_term(F)), z),
                                    exists(vn, eq(rmul(u, v), cst(1))))))));
  return body;
}

namespace {

// One leaf of a Kiefe formula: P = 0, optionally under an existential.
struct KiefeLeaf {
  Polynomial P;
  std::string quant; // empty for a bare equation
};

// Ring-term image of the Boolean structure of psi over the leaf slots.
TermPtr combination_term(const Formula* f, std::vector<KiefeLeaf>& leaves,
                         const std::vector<std::string>& slots, size_t& next) {
  if (is_kiefe_leaf(f)) return var(slots[next++]);
  auto tr_not = [](const TermPtr& t) { return rsub(cst(1), t); };
  switch (f->kind) {
    case Formula::Kind::Not:
      return tr_not(combination_term(f->sub[0].get(), leaves, slots, next));
    case Formula::Kind::And: {
      TermPtr a = combination_term(f->sub[0].get(), leaves, slots, next);
      TermPtr b = combination_term(f->sub[1].get(), leaves, slots, next);
      return rmul(a, b);
    }
    case Formula::Kind::Or: {
      TermPtr a = combination_term(f->sub[0].get(), leaves, slots, next);
      TermPtr b = combination_term(f->sub[1].get(), leaves, slots, next);
      return rsub(radd(a, b), rmul(a, b));
    }
    case Formula::Kind::Implies: {
      TermPtr a = combination_term(f->sub[0].get(), leaves, slots, next);
      TermPtr b = combination_term(f->sub[1].get(), leaves, slots, next);
      return rsub(radd(tr_not(a), b), rmul(tr_not(a), b));
    }
    case Formula::Kind::Iff: {
      TermPtr a = combination_term(f->sub[0].get(), leaves, slots, next);
      TermPtr b = combination_term(f->sub[1].get(), leaves, slots, next);
      TermPtr both = rmul(a, b);
      TermPtr neither = rmul(tr_not(a), tr_not(b));
      return rsub(radd(both, neither), rmul(both, neither));
    }
    default:
      throw std::logic_error("unexpected node in a certified Kiefe formula");
  }
}

void collect_leaves(const Formula* f, std::vector<KiefeLeaf>& leaves) {
  if (is_kiefe_leaf(f)) {
    if (f->kind == Formula::Kind::Eq)
      leaves.push_back({atomic_to_polynomial(FormulaPtr(f, [](const Formula*) {})), ""});
    else
      leaves.push_back({atomic_to_polynomial(f->sub[0]), f->bound});
    return;
  }
  for (const auto& s : f->sub) collect_leaves(s.get(), leaves);
}

// K of one leaf, written so the whole thing prenexes to E*A*E* and stays
// cheap to brute-force: the slot is idempotent, vanishing of P certifies
// containment in the root set of one witness t (the product lets one t cover
// every position at once), and the associate-witness equation
// w * P * (1 - s) = 1 - s certifies that no position outside s has a root.
FormulaPtr leaf_representation(const KiefeLeaf& leaf, const std::string& slot,
                               std::set<std::string> used) {
  TermPtr s = var(slot);
  TermPtr P = polynomial_to_term(leaf.P);
  TermPtr co = rsub(cst(1), s);
  for (const auto& v : leaf.P.variables()) used.insert(v);
  used.insert(slot);
  std::string wn = fresh_name("w", used);
  TermPtr w = var(wn);
  FormulaPtr idem = eq(rmul(s, s), s);
  FormulaPtr inside = eq(rmul(s, P), cst(0));
  FormulaPtr outside = exists(wn, eq(rmul(rmul(w, P), co), co));
  if (leaf.quant.empty()) return land(idem, land(inside, outside));
  return land(idem, land(exists(leaf.quant, inside),
                         forall(leaf.quant, outside)));
}

} // namespace

FormulaPtr upsilon_kiefe(const KiefeFormula& psi) {
  std::vector<KiefeLeaf> leaves;
  collect_leaves(psi.formula.get(), leaves);
  std::set<std::string> used = all_variables(psi.formula);
  used.insert(kSetVar);
  std::vector<std::string> slots;
  for (size_t i = 0; i < leaves.size(); ++i) {
    slots.push_back(fresh_name("s" + std::to_string(i + 1), used));
    used.insert(slots.back());
  }
  size_t next = 0;
  TermPtr combo = combination_term(psi.formula.get(), leaves, slots, next);
  FormulaPtr body = eq(var(kSetVar), combo);
  for (size_t i = leaves.size(); i-- > 0;)
    body = exists(slots[i], land(leaf_representation(leaves[i], slots[i], used), body));
  return body;
}

FormulaPtr atom_formula() { return generic_atom_formula(); }

FormulaPtr e_formula(const KiefeFormula& psi, int k) {
  if (k < 1) throw std::invalid_argument("e_formula needs k >= 1");
  FormulaPtr up = upsilon_kiefe(psi);
  std::set<std::string> used = all_variables(up);
  FormulaPtr at = atom_formula();
  for (const auto& v : all_variables(at)) used.insert(v);
  std::vector<std::string> zs;
  for (int i = 0; i < k; ++i) {
    zs.push_back(fresh_name("c" + std::to_string(i + 1), used));
    used.insert(zs.back());
  }
  std::string zn = fresh_name("c", used);
  TermPtr z = var(zn);

  std::vector<FormulaPtr> inner;
  for (const auto& zi : zs) inner.push_back(eq(rmul(var(zi), z), var(zi)));
  inner.push_back(substitute(up, {{kSetVar, z}}));
  FormulaPtr body = exists(zn, conj(inner));
  for (int i = k; i-- > 0;) {
    std::vector<FormulaPtr> guard;
    guard.push_back(substitute(at, {{"x", var(zs[i])}}));
    for (int j = 0; j < i; ++j) guard.push_back(lnot(eq(var(zs[i]), var(zs[j]))));
    guard.push_back(body);
    body = exists(zs[i], conj(guard));
  }
  return body;
}

KiefeProvider default_table_provider(long long N, long long M) {
  return [N, M](const FormulaPtr& component) -> FormulaPtr {
    std::vector<FormulaPtr> parts;
    for (int q : prime_powers_up_to(static_cast<int>(M))) {
      if (q < N) continue;
      parts.push_back(limplies(field_sentence(q, M).formula, theta_q(component, q)));
    }
    return conj(parts);
  };
}

FormulaPtr reduce_to_eae(const FormulaPtr& phi, const KiefeProvider& provider,
                         long long N, long long M,
                         std::vector<QECertificate>* certs) {
  TightDecomposition td = tighten(phi, certs);

  std::map<size_t, FormulaPtr> psi; // component index -> Kiefe equivalent
  auto component_psi = [&](size_t i) {
    auto it = psi.find(i);
    if (it != psi.end()) return it->second;
    const FormulaPtr& th = td.components[i];
    FormulaPtr out = is_kiefe(th)
                         ? th
                         : kiefe_patch(th, KiefeFormula(provider(th)), N, M).formula;
    psi.emplace(i, out);
    return out;
  };

  std::function<FormulaPtr(const FormulaPtr&)> walk =
      [&](const FormulaPtr& f) -> FormulaPtr {
    switch (f->kind) {
      case Formula::Kind::Card: {
        if (f->terms[0]->kind != Term::Kind::Var)
          throw std::logic_error("tight sigma must apply Atl to variables");
        int idx = std::stoi(f->terms[0]->sym.substr(1)) - 1;
        if (f->k < 1) return truth();
        return e_formula(KiefeFormula(component_psi(idx)), f->k);
      }
      case Formula::Kind::Not:
        return lnot(walk(f->sub[0]));
      case Formula::Kind::And:
        return land(walk(f->sub[0]), walk(f->sub[1]));
      case Formula::Kind::Or:
        return lor(walk(f->sub[0]), walk(f->sub[1]));
      case Formula::Kind::Implies:
        return limplies(walk(f->sub[0]), walk(f->sub[1]));
      case Formula::Kind::Iff:
        return liff(walk(f->sub[0]), walk(f->sub[1]));
      default:
        throw std::logic_error("tight sigma must be quantifier-free over Atl");
    }
  };
  return walk(td.sigma);
}

} // namespace fvkit
