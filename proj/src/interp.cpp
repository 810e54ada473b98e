#include "fvkit/interp.hpp"

#include "fvkit/parser.hpp"

#include <stdexcept>

namespace fvkit {

FormulaPtr KitFormula::operator()(const std::vector<TermPtr>& args) const {
  if (args.size() != params.size())
    throw std::invalid_argument("kit formula arity mismatch");
  std::map<std::string, TermPtr> sub;
  for (size_t i = 0; i < params.size(); ++i) sub[params[i]] = args[i];
  return substitute(body, sub);
}

InterpretationKit idempotent_kit() {
  TermPtr x = var("x"), y = var("y"), z = var("z");
  InterpretationKit kit;
  kit.in_b = {{"x"}, eq(rmul(x, x), x)};
  kit.eq = {{"x", "y"}, eq(x, y)};
  kit.zero = {{"x"}, eq(x, cst(0))};
  kit.one = {{"x"}, eq(x, cst(1))};
  kit.meet = {{"x", "y", "z"}, eq(rmul(x, y), z)};
  kit.join = {{"x", "y", "z"},
              eq(rmul(rsub(cst(1), x), rsub(cst(1), y)), rsub(cst(1), z))};
  kit.comp = {{"x", "y"}, eq(rsub(cst(1), x), y)};
  return kit;
}

bool is_positive_primitive(const FormulaPtr& f) {
  const Formula* cur = f.get();
  while (cur->kind == Formula::Kind::Exists) cur = cur->sub[0].get();
  // conjunction tree of equalities
  std::vector<const Formula*> stack = {cur};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (g->kind == Formula::Kind::And) {
      stack.push_back(g->sub[0].get());
      stack.push_back(g->sub[1].get());
    } else if (g->kind != Formula::Kind::Eq) {
      return false;
    }
  }
  return true;
}

bool is_idempotent(const ProductStructure& P, const ProductElement& e) {
  return P.mul(e, e) == e;
}

IndexSet decode_idempotent(const ProductStructure& P, const ProductElement& e) {
  IndexSet s = 0;
  for (size_t i = 0; i < P.factors.size(); ++i)
    if (e[i] == P.factors[i].constant(1)) s |= IndexSet{1} << i;
  return s;
}

ProductElement indicator_idempotent(const ProductStructure& P, IndexSet s) {
  ProductElement e(P.factors.size());
  for (size_t i = 0; i < P.factors.size(); ++i)
    e[i] = P.factors[i].constant(s >> i & 1 ? 1 : 0);
  return e;
}

static FormulaPtr idem(const TermPtr& t) { return eq(rmul(t, t), t); }

FormulaPtr upsilon_atomic(const Polynomial& F) {
  std::set<std::string> used;
  for (const auto& v : F.variables()) used.insert(v);
  used.insert(kSetVar);
  std::string zn = fresh_name("z", used);
  TermPtr y = var(kSetVar), z = var(zn);
  Polynomial Fy = F * Polynomial::variable(kSetVar);
  Polynomial Fz = F * Polynomial::variable(zn);
  FormulaPtr largest = forall(
      zn, limplies(land(idem(z), eq(polynomial_to_term(Fz), cst(0))),
                   eq(rmul(z, y), z)));
  return land(idem(y), land(eq(polynomial_to_term(Fy), cst(0)), largest));
}

FormulaPtr upsilon_boolean(const FormulaPtr& up_phi, const FormulaPtr& up_psi) {
  std::set<std::string> used = all_variables(up_phi);
  for (const auto& v : all_variables(up_psi)) used.insert(v);
  std::string un = fresh_name("u", used);
  used.insert(un);
  std::string vn = fresh_name("v", used);
  used.insert(vn);
  std::string wn = fresh_name("w", used);
  TermPtr u = var(un), v = var(vn), w = var(wn), y = var(kSetVar);
  FormulaPtr phi_u = substitute(up_phi, {{kSetVar, u}});
  FormulaPtr psi_v = substitute(up_psi, {{kSetVar, v}});
  // exists u exists v exists w: phi(u), psi(v), w = comp(v), y = u meet w
  FormulaPtr inner =
      exists(wn, land(eq(rsub(cst(1), v), w), eq(rmul(u, w), y)));
  return exists(un, land(phi_u, exists(vn, land(psi_v, inner))));
}

FormulaPtr upsilon_exists(const FormulaPtr& up_phi, const std::string& z) {
  std::set<std::string> used = all_variables(up_phi);
  used.insert(z);
  used.insert(kSetVar);
  std::string wn = fresh_name("w", used);
  used.insert(wn);
  std::string vn = fresh_name("v", used);
  TermPtr w = var(wn), y = var(kSetVar), v = var(vn);
  // Xi(y): for every z some w covers K_phi(x,z) and sits below y
  FormulaPtr xi = forall(
      z, exists(wn, land(substitute(up_phi, {{kSetVar, w}}),
                         eq(rmul(w, y), w))));
  FormulaPtr xi_v = substitute(xi, {{kSetVar, v}});
  return land(xi, forall(vn, limplies(xi_v, eq(rmul(y, v), y))));
}

FormulaPtr RepresentationMap::represent(const FormulaPtr& phi) {
  std::string key = render_formula(normalize_bound(phi));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  FormulaPtr out;
  switch (phi->kind) {
    case Formula::Kind::Eq:
      out = upsilon_atomic(atomic_to_polynomial(phi));
      break;
    case Formula::Kind::Card:
      throw std::invalid_argument("represent: ring formulas only");
    case Formula::Kind::Not:
      out = upsilon_boolean(represent(truth()), represent(phi->sub[0]));
      break;
    case Formula::Kind::And:
      out = upsilon_boolean(represent(phi->sub[0]),
                            represent(lnot(phi->sub[1])));
      break;
    case Formula::Kind::Or:
      out = represent(lnot(land(lnot(phi->sub[0]), lnot(phi->sub[1]))));
      break;
    case Formula::Kind::Implies:
      out = represent(lor(lnot(phi->sub[0]), phi->sub[1]));
      break;
    case Formula::Kind::Iff:
      out = represent(land(limplies(phi->sub[0], phi->sub[1]),
                           limplies(phi->sub[1], phi->sub[0])));
      break;
    case Formula::Kind::Exists:
      if (!free_variables(phi->sub[0]).count(phi->bound))
        out = represent(phi->sub[0]);
      else
        out = upsilon_exists(represent(phi->sub[0]), phi->bound);
      break;
    case Formula::Kind::Forall:
      out = represent(lnot(exists(phi->bound, lnot(phi->sub[0]))));
      break;
  }
  cache_.emplace(std::move(key), out);
  return out;
}

FormulaPtr represent(const FormulaPtr& phi) {
  RepresentationMap m;
  return m.represent(phi);
}

FormulaPtr generic_atom_formula() {
  TermPtr x = var("x"), u = var("u");
  FormulaPtr below = forall(
      "u", limplies(idem(u), lor(eq(rmul(x, u), x), eq(rmul(x, u), cst(0)))));
  return land(idem(x), land(lnot(eq(x, cst(0))), below));
}

namespace {

// Translates the Boolean side of an acceptable sequence into the ring
// language: component variables become the bound representation slots,
// Boolean symbols go through the kit, quantifiers are relativized to
// idempotents, and Atl[k] unfolds to k distinct atoms below its argument.
struct BoolTranslator {
  const InterpretationKit& kit;
  FormulaPtr atomf; // free variable "x"
  std::map<std::string, std::string> env; // Boolean var -> ring var
  std::set<std::string> used;

  std::string fresh(const std::string& stem) {
    std::string n = fresh_name(stem, used);
    used.insert(n);
    return n;
  }

  TermPtr tr_term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env.find(t->sym);
        if (it == env.end())
          throw std::invalid_argument("unbound Boolean variable " + t->sym);
        return var(it->second);
      }
      case Term::Kind::Cst:
        return cst(std::stoll(t->sym));
      case Term::Kind::App: {
        if (t->sym == "meet")
          return rmul(tr_term(t->args[0]), tr_term(t->args[1]));
        if (t->sym == "join") {
          TermPtr a = tr_term(t->args[0]), b = tr_term(t->args[1]);
          return rsub(radd(a, b), rmul(a, b));
        }
        if (t->sym == "comp") return rsub(cst(1), tr_term(t->args[0]));
        throw std::invalid_argument("unsupported Boolean symbol " + t->sym);
      }
    }
    throw std::logic_error("unreachable");
  }

  FormulaPtr atom_at(const TermPtr& t) {
    return substitute(atomf, {{"x", t}});
  }

  FormulaPtr card(int k, const TermPtr& arg, std::vector<TermPtr>& zs) {
    if (static_cast<int>(zs.size()) == k) return truth();
    std::string zn = fresh("a" + std::to_string(zs.size() + 1));
    TermPtr z = var(zn);
    std::vector<FormulaPtr> body;
    body.push_back(atom_at(z));
    body.push_back(eq(rmul(z, arg), z));
    for (const auto& prev : zs) body.push_back(lnot(eq(z, prev)));
    zs.push_back(z);
    body.push_back(card(k, arg, zs));
    zs.pop_back();
    return exists(zn, conj(body));
  }

  FormulaPtr tr(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Eq:
        return eq(tr_term(f->terms[0]), tr_term(f->terms[1]));
      case Formula::Kind::Card: {
        if (f->k <= 0) return truth();
        TermPtr arg = tr_term(f->terms[0]);
        std::vector<TermPtr> zs;
        return card(f->k, arg, zs);
      }
      case Formula::Kind::Not:
        return lnot(tr(f->sub[0]));
      case Formula::Kind::And:
        return land(tr(f->sub[0]), tr(f->sub[1]));
      case Formula::Kind::Or:
        return lor(tr(f->sub[0]), tr(f->sub[1]));
      case Formula::Kind::Implies:
        return limplies(tr(f->sub[0]), tr(f->sub[1]));
      case Formula::Kind::Iff:
        return liff(tr(f->sub[0]), tr(f->sub[1]));
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::string rv = fresh(f->bound);
        auto saved = env.find(f->bound);
        std::string old;
        bool had = saved != env.end();
        if (had) old = saved->second;
        env[f->bound] = rv;
        FormulaPtr body = tr(f->sub[0]);
        if (had)
          env[f->bound] = old;
        else
          env.erase(f->bound);
        FormulaPtr guard = kit.in_b({var(rv)});
        return f->kind == Formula::Kind::Exists
                   ? exists(rv, land(guard, body))
                   : forall(rv, limplies(guard, body));
      }
    }
    throw std::logic_error("unreachable");
  }
};

} // namespace

FormulaPtr define_acceptable(const AcceptableSequence& xi,
                             const InterpretationKit& kit,
                             const FormulaPtr& atom_def) {
  BoolTranslator tx{kit, atom_def ? atom_def : generic_atom_formula(), {}, {}};

  RepresentationMap reps;
  std::vector<FormulaPtr> ups;
  for (const auto& th : xi.components) {
    FormulaPtr u = reps.represent(th);
    ups.push_back(u);
    for (const auto& v : all_variables(u)) tx.used.insert(v);
  }
  for (const auto& v : all_variables(xi.bool_formula)) tx.used.insert(v);
  for (const auto& v : all_variables(tx.atomf)) tx.used.insert(v);

  std::vector<std::string> slots;
  for (size_t i = 0; i < xi.components.size(); ++i) {
    slots.push_back(tx.fresh("b" + std::to_string(i + 1)));
    tx.env[component_var(i)] = slots.back();
  }

  FormulaPtr body = tx.tr(xi.bool_formula);
  for (size_t i = xi.components.size(); i-- > 0;) {
    FormulaPtr up = substitute(ups[i], {{kSetVar, var(slots[i])}});
    body = exists(slots[i], land(up, body));
  }
  return body;
}

} // namespace fvkit
