#include "fvkit/ba.hpp"

#include "fvkit/fv.hpp"
#include "fvkit/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace fvkit {

namespace {

using Mask = std::uint32_t;
using State = std::vector<int>; // per-minterm abstract cardinality; TOP = B+1

// Bound variables are renamed apart from everything else so that the
// minterm/variable bookkeeping below never sees shadowing.
FormulaPtr rename_bound(const FormulaPtr& f, std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Card:
      return f;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string nb = f->bound;
      if (used.count(nb)) {
        nb = fresh_name(f->bound, used);
      }
      used.insert(nb);
      FormulaPtr body = nb == f->bound ? f->sub[0]
                                       : substitute(f->sub[0], {{f->bound, var(nb)}});
      body = rename_bound(body, used);
      return f->kind == Formula::Kind::Exists ? exists(nb, body) : forall(nb, body);
    }
    default: {
      std::vector<FormulaPtr> subs;
      for (const auto& s : f->sub) subs.push_back(rename_bound(s, used));
      switch (f->kind) {
        case Formula::Kind::Not: return lnot(subs[0]);
        case Formula::Kind::And: return land(subs[0], subs[1]);
        case Formula::Kind::Or: return lor(subs[0], subs[1]);
        case Formula::Kind::Implies: return limplies(subs[0], subs[1]);
        case Formula::Kind::Iff: return liff(subs[0], subs[1]);
        default: return f;
      }
    }
  }
}

FormulaPtr rename_bound_apart(const FormulaPtr& f) {
  std::set<std::string> used = free_variables(f);
  return rename_bound(f, used);
}

int var_pos(const std::vector<std::string>& vars, const std::string& name) {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  throw std::logic_error("variable out of scope: " + name);
}

// Minterm M (bitmask over variable positions) is inside the term iff bit M of
// the returned mask is set.
Mask term_mask(const TermPtr& t, const std::vector<std::string>& vars) {
  size_t minterms = size_t{1} << vars.size();
  Mask full = minterms >= 32 ? ~Mask{0} : (Mask{1} << minterms) - 1;
  switch (t->kind) {
    case Term::Kind::Var: {
      int p = var_pos(vars, t->sym);
      Mask m = 0;
      for (size_t M = 0; M < minterms; ++M)
        if (M >> p & 1) m |= Mask{1} << M;
      return m;
    }
    case Term::Kind::Cst:
      if (t->sym == "0") return 0;
      if (t->sym == "1") return full;
      throw std::invalid_argument("Boolean constants are 0 and 1 only");
    case Term::Kind::App:
      if (t->sym == "meet")
        return term_mask(t->args[0], vars) & term_mask(t->args[1], vars);
      if (t->sym == "join")
        return term_mask(t->args[0], vars) | term_mask(t->args[1], vars);
      if (t->sym == "comp") return ~term_mask(t->args[0], vars) & full;
      throw std::invalid_argument("not a Boolean symbol: " + t->sym);
  }
  return 0;
}

struct BAContext {
  int B;
  std::map<std::pair<const Formula*, std::string>, bool> memo;
};

std::string encode_state(const State& s) {
  std::string out;
  out.reserve(s.size());
  for (int v : s) out.push_back(static_cast<char>('0' + v));
  return out;
}

bool ba_eval(BAContext& ctx, const FormulaPtr& f, const std::vector<std::string>& vars,
             const State& state);

// Conjuncts that are equalities force their symmetric difference to be empty;
// ~Atl[1](t) forces t itself to be empty. Used to prune existential splits.
Mask zero_mask(const FormulaPtr& f, const std::vector<std::string>& vars) {
  switch (f->kind) {
    case Formula::Kind::And:
      return zero_mask(f->sub[0], vars) | zero_mask(f->sub[1], vars);
    case Formula::Kind::Eq:
      return term_mask(f->terms[0], vars) ^ term_mask(f->terms[1], vars);
    case Formula::Kind::Not:
      if (f->sub[0]->kind == Formula::Kind::Card && f->sub[0]->k == 1)
        return term_mask(f->sub[0]->terms[0], vars);
      return 0;
    default:
      return 0;
  }
}

// Searches for a split of the state along the quantified variable that makes
// the body evaluate to `target`.
bool find_split(BAContext& ctx, const FormulaPtr& quant,
                const std::vector<std::string>& vars, const State& state, bool target) {
  std::vector<std::string> nvars = vars;
  nvars.push_back(quant->bound);
  size_t r = vars.size();
  size_t old_minterms = size_t{1} << r;
  const FormulaPtr& body = quant->sub[0];

  Mask zero = target ? zero_mask(body, nvars) : 0;
  int TOP = ctx.B + 1;

  // per old minterm: the admissible (in, out) value pairs
  std::vector<std::vector<std::pair<int, int>>> options(old_minterms);
  for (size_t M = 0; M < old_minterms; ++M) {
    bool in_zero = zero >> (M | old_minterms) & 1;
    bool out_zero = zero >> M & 1;
    int v = state[M];
    auto push = [&](int in, int out) {
      if (in_zero && in != 0) return;
      if (out_zero && out != 0) return;
      options[M].emplace_back(in, out);
    };
    if (v <= ctx.B) {
      for (int a = 0; a <= v; ++a) push(a, v - a);
    } else {
      push(0, TOP);
      push(TOP, 0);
      push(TOP, TOP);
      for (int a = 1; a <= ctx.B; ++a) {
        push(a, TOP);
        push(TOP, a);
      }
    }
    if (options[M].empty()) return false; // forced contradiction
  }

  State nstate(old_minterms * 2, 0);
  std::vector<size_t> choice(old_minterms, 0);
  size_t M = 0;
  for (;;) {
    if (M == old_minterms) {
      if (ba_eval(ctx, body, nvars, nstate) == target) return true;
      // backtrack
      while (M > 0) {
        --M;
        if (++choice[M] < options[M].size()) break;
        choice[M] = 0;
        if (M == 0) return false;
      }
      if (M == 0 && choice[0] == 0) return false;
    }
    const auto& [in, out] = options[M][choice[M]];
    nstate[M | old_minterms] = in;
    nstate[M] = out;
    ++M;
  }
}

bool ba_eval(BAContext& ctx, const FormulaPtr& f, const std::vector<std::string>& vars,
             const State& state) {
  switch (f->kind) {
    case Formula::Kind::Eq: {
      Mask diff = term_mask(f->terms[0], vars) ^ term_mask(f->terms[1], vars);
      for (size_t M = 0; M < state.size(); ++M)
        if ((diff >> M & 1) && state[M] != 0) return false;
      return true;
    }
    case Formula::Kind::Card: {
      Mask m = term_mask(f->terms[0], vars);
      long long sum = 0;
      for (size_t M = 0; M < state.size(); ++M) {
        if (!(m >> M & 1)) continue;
        if (state[M] > ctx.B) return true; // infinite part
        sum += state[M];
        if (sum >= f->k) return true;
      }
      return sum >= f->k;
    }
    case Formula::Kind::Not:
      return !ba_eval(ctx, f->sub[0], vars, state);
    case Formula::Kind::And:
      return ba_eval(ctx, f->sub[0], vars, state) && ba_eval(ctx, f->sub[1], vars, state);
    case Formula::Kind::Or:
      return ba_eval(ctx, f->sub[0], vars, state) || ba_eval(ctx, f->sub[1], vars, state);
    case Formula::Kind::Implies:
      return !ba_eval(ctx, f->sub[0], vars, state) || ba_eval(ctx, f->sub[1], vars, state);
    case Formula::Kind::Iff:
      return ba_eval(ctx, f->sub[0], vars, state) == ba_eval(ctx, f->sub[1], vars, state);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::pair<const Formula*, std::string> key{f.get(), encode_state(state)};
      auto hit = ctx.memo.find(key);
      if (hit != ctx.memo.end()) return hit->second;
      bool result;
      if (f->kind == Formula::Kind::Exists)
        result = find_split(ctx, f, vars, state, true);
      else
        result = !find_split(ctx, f, vars, state, false);
      ctx.memo.emplace(std::move(key), result);
      return result;
    }
  }
  return false;
}

long long state_count(int values, size_t minterms, long long budget) {
  long long n = 1;
  for (size_t i = 0; i < minterms; ++i) {
    n *= values;
    if (n > budget) return -1;
  }
  return n;
}

State decode_state(long long code, int values, size_t minterms) {
  State s(minterms);
  for (size_t i = 0; i < minterms; ++i) {
    s[i] = static_cast<int>(code % values);
    code /= values;
  }
  return s;
}

int formula_B(const FormulaPtr& f) { return std::max(1, max_card_index(f)); }

// ---- synthesis of a quantifier-free formula from an accepted state set ----

TermPtr minterm_term(size_t M, const std::vector<std::string>& vars) {
  if (vars.empty()) return cst(1);
  TermPtr acc;
  for (size_t i = 0; i < vars.size(); ++i) {
    TermPtr lit = M >> i & 1 ? var(vars[i]) : bcomp(var(vars[i]));
    acc = acc ? bmeet(acc, lit) : lit;
  }
  return acc;
}

// Describes "the cardinality of t lies in [a, b]" (b == TOP means unbounded).
FormulaPtr run_condition(const TermPtr& t, int a, int b, int TOP) {
  std::vector<FormulaPtr> parts;
  if (a > 0) parts.push_back(atcard(a, t));
  if (b < TOP) parts.push_back(lnot(atcard(b + 1, t)));
  return conj(parts);
}

struct Synth {
  std::vector<std::string> vars;
  int values; // B + 2
  std::map<std::pair<size_t, std::vector<long long>>, FormulaPtr> memo;

  FormulaPtr run(size_t mi, std::vector<long long> codes) {
    size_t minterms = size_t{1} << vars.size();
    if (codes.empty()) return falsity();
    if (mi == minterms) return truth();
    std::sort(codes.begin(), codes.end());
    auto key = std::make_pair(mi, codes);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;

    long long div = 1;
    for (size_t i = 0; i < mi; ++i) div *= values;

    // residual sets per digit value, with the digit cleared
    std::vector<std::vector<long long>> residual(values);
    for (long long c : codes) {
      int v = static_cast<int>(c / div % values);
      residual[v].push_back(c - static_cast<long long>(v) * div);
    }
    for (auto& rset : residual) {
      std::sort(rset.begin(), rset.end());
      rset.erase(std::unique(rset.begin(), rset.end()), rset.end());
    }

    TermPtr mt = minterm_term(mi, vars);
    std::vector<FormulaPtr> branches;
    std::vector<bool> done(values, false);
    for (int v = 0; v < values; ++v) {
      if (done[v] || residual[v].empty()) continue;
      // values sharing this residual set, gathered into runs
      std::vector<int> same;
      for (int u = v; u < values; ++u)
        if (!done[u] && residual[u] == residual[v]) {
          same.push_back(u);
          done[u] = true;
        }
      FormulaPtr sub = run(mi + 1, residual[v]);
      std::vector<FormulaPtr> runs;
      size_t i = 0;
      while (i < same.size()) {
        size_t j = i;
        while (j + 1 < same.size() && same[j + 1] == same[j] + 1) ++j;
        runs.push_back(run_condition(mt, same[i], same[j], values - 1));
        i = j + 1;
      }
      FormulaPtr cond = disj(runs);
      if (cond->kind == Formula::Kind::Eq && struct_equal(cond, truth()))
        branches.push_back(sub);
      else
        branches.push_back(land(cond, sub));
    }
    FormulaPtr out = disj(branches);
    memo.emplace(std::move(key), out);
    return out;
  }
};

FormulaPtr synthesize(const std::vector<std::string>& vars, int B,
                      const std::vector<long long>& accepted) {
  Synth s{vars, B + 2, {}};
  return s.run(0, accepted);
}

// Replaces one innermost quantified subformula by a synthesized equivalent.
FormulaPtr eliminate_one(const FormulaPtr& quant, std::vector<QECertificate>* certs,
                         long long budget) {
  std::set<std::string> fv = free_variables(quant);
  std::vector<std::string> vars(fv.begin(), fv.end());
  size_t minterms = size_t{1} << vars.size();
  if (vars.size() > 5) throw BoundExceeded("too many variables for BA elimination");
  int B = formula_B(quant);
  long long total = state_count(B + 2, minterms, budget);
  if (total < 0) throw BoundExceeded("BA state budget exceeded");

  BAContext ctx{B, {}};
  std::vector<long long> accepted;
  for (long long code = 0; code < total; ++code) {
    State s = decode_state(code, B + 2, minterms);
    if (ba_eval(ctx, quant, vars, s)) accepted.push_back(code);
  }
  FormulaPtr out = synthesize(vars, B, accepted);

  if (certs) {
    QECertificate c;
    c.before = quant;
    c.after = out;
    c.passed = infinite_ba_valid(liff(quant, out)).valid;
    certs->push_back(c);
  }
  return out;
}

FormulaPtr qe_rec(const FormulaPtr& f, std::vector<QECertificate>* certs,
                  long long budget) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Card:
      return f;
    case Formula::Kind::Not:
      return lnot(qe_rec(f->sub[0], certs, budget));
    case Formula::Kind::And:
      return land(qe_rec(f->sub[0], certs, budget), qe_rec(f->sub[1], certs, budget));
    case Formula::Kind::Or:
      return lor(qe_rec(f->sub[0], certs, budget), qe_rec(f->sub[1], certs, budget));
    case Formula::Kind::Implies:
      return limplies(qe_rec(f->sub[0], certs, budget), qe_rec(f->sub[1], certs, budget));
    case Formula::Kind::Iff:
      return liff(qe_rec(f->sub[0], certs, budget), qe_rec(f->sub[1], certs, budget));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      FormulaPtr body = qe_rec(f->sub[0], certs, budget);
      FormulaPtr quant = f->kind == Formula::Kind::Exists ? exists(f->bound, body)
                                                          : forall(f->bound, body);
      return eliminate_one(quant, certs, budget);
    }
  }
  return f;
}

} // namespace

BAVerdict infinite_ba_valid(const FormulaPtr& phi, long long state_budget) {
  FormulaPtr f = rename_bound_apart(phi);
  std::set<std::string> fv = free_variables(f);
  std::vector<std::string> vars(fv.begin(), fv.end());
  if (vars.size() > 5) throw BoundExceeded("too many free variables for the BA oracle");
  size_t minterms = size_t{1} << vars.size();
  int B = formula_B(f);
  long long total = state_count(B + 2, minterms, state_budget);
  if (total < 0) throw BoundExceeded("BA state budget exceeded");

  BAContext ctx{B, {}};
  BAVerdict verdict{true, false};
  for (long long code = 0; code < total; ++code) {
    State s = decode_state(code, B + 2, minterms);
    bool admissible = false;
    for (int v : s)
      if (v == B + 1) admissible = true;
    if (!admissible) continue; // an infinite algebra has infinitely many atoms
    bool t = ba_eval(ctx, f, vars, s);
    verdict.valid = verdict.valid && t;
    verdict.satisfiable = verdict.satisfiable || t;
    if (!verdict.valid && verdict.satisfiable) break;
  }
  return verdict;
}

bool infinite_ba_models(const FormulaPtr& phi) { return infinite_ba_valid(phi).valid; }

FormulaPtr ba_eliminate_quantifiers(const FormulaPtr& phi,
                                    std::vector<QECertificate>* certs,
                                    long long state_budget) {
  if (is_quantifier_free(phi)) return phi;
  return qe_rec(rename_bound_apart(phi), certs, state_budget);
}

FormulaPtr ba_eliminate_quantifiers(const FormulaPtr& phi, long long state_budget) {
  return ba_eliminate_quantifiers(phi, nullptr, state_budget);
}

bool is_tight_shape(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Card:
      return f->terms[0]->kind == Term::Kind::Var;
    case Formula::Kind::Eq:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return false;
    default:
      for (const auto& s : f->sub)
        if (!is_tight_shape(s)) return false;
      return true;
  }
}

namespace {

FormulaPtr eliminate_equalities(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Eq: {
      const TermPtr& a = f->terms[0];
      const TermPtr& b = f->terms[1];
      TermPtr diff = bjoin(bmeet(a, bcomp(b)), bmeet(b, bcomp(a)));
      return lnot(atcard(1, diff));
    }
    case Formula::Kind::Card:
      return f;
    case Formula::Kind::Exists:
      return exists(f->bound, eliminate_equalities(f->sub[0]));
    case Formula::Kind::Forall:
      return forall(f->bound, eliminate_equalities(f->sub[0]));
    default: {
      std::vector<FormulaPtr> subs;
      for (const auto& s : f->sub) subs.push_back(eliminate_equalities(s));
      switch (f->kind) {
        case Formula::Kind::Not: return lnot(subs[0]);
        case Formula::Kind::And: return land(subs[0], subs[1]);
        case Formula::Kind::Or: return lor(subs[0], subs[1]);
        case Formula::Kind::Implies: return limplies(subs[0], subs[1]);
        case Formula::Kind::Iff: return liff(subs[0], subs[1]);
        default: return f;
      }
    }
  }
}

size_t component_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'y')
    throw std::invalid_argument("expected a component variable, got " + name);
  return static_cast<size_t>(std::stoul(name.substr(1))) - 1;
}

FormulaPtr term_to_base(const TermPtr& t, const std::vector<FormulaPtr>& thetas) {
  switch (t->kind) {
    case Term::Kind::Var: {
      size_t i = component_index(t->sym);
      if (i >= thetas.size()) throw std::invalid_argument("component index out of range");
      return thetas[i];
    }
    case Term::Kind::Cst:
      if (t->sym == "1") return truth();
      if (t->sym == "0") return falsity();
      throw std::invalid_argument("Boolean constants are 0 and 1 only");
    case Term::Kind::App:
      if (t->sym == "meet")
        return land(term_to_base(t->args[0], thetas), term_to_base(t->args[1], thetas));
      if (t->sym == "join")
        return lor(term_to_base(t->args[0], thetas), term_to_base(t->args[1], thetas));
      if (t->sym == "comp") return lnot(term_to_base(t->args[0], thetas));
      throw std::invalid_argument("not a Boolean symbol: " + t->sym);
  }
  return truth();
}

FormulaPtr absorb_rec(const FormulaPtr& f, const std::vector<FormulaPtr>& thetas,
                      std::vector<FormulaPtr>& components) {
  switch (f->kind) {
    case Formula::Kind::Card: {
      FormulaPtr base = term_to_base(f->terms[0], thetas);
      size_t pos = components.size();
      for (size_t i = 0; i < components.size(); ++i)
        if (normalized_equal(components[i], base)) {
          pos = i;
          break;
        }
      if (pos == components.size()) components.push_back(base);
      return atcard(f->k, var(component_var(pos)));
    }
    case Formula::Kind::Eq:
      throw std::logic_error("equalities must be eliminated before absorption");
    case Formula::Kind::Not:
      return lnot(absorb_rec(f->sub[0], thetas, components));
    case Formula::Kind::And:
      return land(absorb_rec(f->sub[0], thetas, components),
                  absorb_rec(f->sub[1], thetas, components));
    case Formula::Kind::Or:
      return lor(absorb_rec(f->sub[0], thetas, components),
                 absorb_rec(f->sub[1], thetas, components));
    case Formula::Kind::Implies:
      return limplies(absorb_rec(f->sub[0], thetas, components),
                      absorb_rec(f->sub[1], thetas, components));
    case Formula::Kind::Iff:
      return liff(absorb_rec(f->sub[0], thetas, components),
                  absorb_rec(f->sub[1], thetas, components));
    default:
      throw std::invalid_argument("absorb_and_strip needs quantifier-free input");
  }
}

} // namespace

TightDecomposition absorb_and_strip(const FormulaPtr& sigma2,
                                    const std::vector<FormulaPtr>& thetas) {
  if (!is_quantifier_free(sigma2))
    throw std::invalid_argument("absorb_and_strip needs quantifier-free input");
  FormulaPtr eqfree = eliminate_equalities(sigma2);
  TightDecomposition td;
  td.sigma = absorb_rec(eqfree, thetas, td.components);
  return td;
}

TightDecomposition tighten(const FormulaPtr& phi, std::vector<QECertificate>* certs) {
  AcceptableSequence xi = decompose(phi);
  FormulaPtr sigma2 = ba_eliminate_quantifiers(xi.bool_formula, certs);
  return absorb_and_strip(sigma2, xi.components);
}

TightDecomposition tighten(const FormulaPtr& phi) { return tighten(phi, nullptr); }

static void collect_atoms(const FormulaPtr& f,
                          std::vector<std::pair<size_t, int>>& out) {
  if (f->kind == Formula::Kind::Card) {
    out.emplace_back(component_index(f->terms[0]->sym), f->k);
    return;
  }
  for (const auto& s : f->sub) collect_atoms(s, out);
}

std::vector<std::pair<size_t, int>> e_set_atoms(const TightDecomposition& td) {
  std::vector<std::pair<size_t, int>> out;
  collect_atoms(td.sigma, out);
  return out;
}

static bool eval_counts(const FormulaPtr& f, const std::vector<int>& counts) {
  switch (f->kind) {
    case Formula::Kind::Card:
      return counts[component_index(f->terms[0]->sym)] >= f->k;
    case Formula::Kind::Not:
      return !eval_counts(f->sub[0], counts);
    case Formula::Kind::And:
      return eval_counts(f->sub[0], counts) && eval_counts(f->sub[1], counts);
    case Formula::Kind::Or:
      return eval_counts(f->sub[0], counts) || eval_counts(f->sub[1], counts);
    case Formula::Kind::Implies:
      return !eval_counts(f->sub[0], counts) || eval_counts(f->sub[1], counts);
    case Formula::Kind::Iff:
      return eval_counts(f->sub[0], counts) == eval_counts(f->sub[1], counts);
    default:
      throw std::invalid_argument("not an E-set shape");
  }
}

bool evaluate_tight(const ProductStructure& P, const TightDecomposition& td,
                    const ProductAssignment& asg) {
  std::vector<int> counts;
  counts.reserve(td.components.size());
  for (const auto& th : td.components) {
    IndexSet s = k_set(P, th, asg);
    int c = 0;
    for (size_t i = 0; i < P.factors.size(); ++i)
      if (s >> i & 1) ++c;
    counts.push_back(c);
  }
  return eval_counts(td.sigma, counts);
}

std::string tight_to_json(const TightDecomposition& td) {
  nlohmann::json j;
  j["sigma"] = render_formula(td.sigma);
  j["components"] = nlohmann::json::array();
  for (const auto& th : td.components) j["components"].push_back(render_formula(th));
  return j.dump(2);
}

} // namespace fvkit
