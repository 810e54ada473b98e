#include "fvkit/ast.hpp"

#include <algorithm>

namespace fvkit {

const Signature& ring_signature() {
  static const Signature sig{
      "ring",
      Flavor::Ring,
      {"0", "1"},
      {{"+", 2}, {"*", 2}, {"-", 1}},
      {{"=", 2}}};
  return sig;
}

const Signature& boolean_signature() {
  static const Signature sig{
      "boolean",
      Flavor::Boolean,
      {"0", "1"},
      {{"meet", 2}, {"join", 2}, {"comp", 1}},
      {{"=", 2}, {"Atl", 1}}};
  return sig;
}

TermPtr var(const std::string& name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->sym = name;
  return t;
}

TermPtr cst(long long value) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Cst;
  t->sym = std::to_string(value);
  return t;
}

TermPtr app(const std::string& sym, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->sym = sym;
  t->args = std::move(args);
  return t;
}

TermPtr radd(TermPtr a, TermPtr b) { return app("+", {std::move(a), std::move(b)}); }
TermPtr rmul(TermPtr a, TermPtr b) { return app("*", {std::move(a), std::move(b)}); }
TermPtr rneg(TermPtr a) { return app("-", {std::move(a)}); }
TermPtr rsub(TermPtr a, TermPtr b) { return radd(std::move(a), rneg(std::move(b))); }
TermPtr bmeet(TermPtr a, TermPtr b) { return app("meet", {std::move(a), std::move(b)}); }
TermPtr bjoin(TermPtr a, TermPtr b) { return app("join", {std::move(a), std::move(b)}); }
TermPtr bcomp(TermPtr a) { return app("comp", {std::move(a)}); }

FormulaPtr eq(TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Eq;
  f->terms = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr atcard(int k, TermPtr t) {
  if (k < 1) throw std::invalid_argument("A_k requires k >= 1");
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Card;
  f->k = k;
  f->terms = {std::move(t)};
  return f;
}

static FormulaPtr unary(Formula::Kind kind, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->sub = {std::move(a)};
  return f;
}

static FormulaPtr binary(Formula::Kind kind, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->sub = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr lnot(FormulaPtr a) { return unary(Formula::Kind::Not, std::move(a)); }
FormulaPtr land(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr limplies(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Implies, std::move(a), std::move(b)); }
FormulaPtr liff(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Iff, std::move(a), std::move(b)); }

FormulaPtr exists(const std::string& v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Exists;
  f->bound = v;
  f->sub = {std::move(body)};
  return f;
}

FormulaPtr forall(const std::string& v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Forall;
  f->bound = v;
  f->sub = {std::move(body)};
  return f;
}

FormulaPtr truth() { return eq(cst(0), cst(0)); }
FormulaPtr falsity() { return lnot(truth()); }

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return truth();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

FormulaPtr disj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return falsity();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->sym != b->sym) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool struct_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->k != b->k || a->bound != b->bound) return false;
  if (a->terms.size() != b->terms.size() || a->sub.size() != b->sub.size()) return false;
  for (size_t i = 0; i < a->terms.size(); ++i)
    if (!term_equal(a->terms[i], b->terms[i])) return false;
  for (size_t i = 0; i < a->sub.size(); ++i)
    if (!struct_equal(a->sub[i], b->sub[i])) return false;
  return true;
}

std::set<std::string> term_vars(const TermPtr& t) {
  std::set<std::string> out;
  if (t->kind == Term::Kind::Var) {
    out.insert(t->sym);
  } else {
    for (const auto& a : t->args) {
      auto sub = term_vars(a);
      out.insert(sub.begin(), sub.end());
    }
  }
  return out;
}

static void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                          std::set<std::string>& out) {
  for (const auto& t : f->terms)
    for (const auto& v : term_vars(t))
      if (!bound.count(v)) out.insert(v);
  if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) {
    bool was = bound.count(f->bound) > 0;
    bound.insert(f->bound);
    free_vars_rec(f->sub[0], bound, out);
    if (!was) bound.erase(f->bound);
  } else {
    for (const auto& s : f->sub) free_vars_rec(s, bound, out);
  }
}

std::set<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

static void all_vars_rec(const FormulaPtr& f, std::set<std::string>& out) {
  for (const auto& t : f->terms) {
    auto tv = term_vars(t);
    out.insert(tv.begin(), tv.end());
  }
  if (!f->bound.empty()) out.insert(f->bound);
  for (const auto& s : f->sub) all_vars_rec(s, out);
}

std::set<std::string> all_variables(const FormulaPtr& f) {
  std::set<std::string> out;
  all_vars_rec(f, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = sub.find(t->sym);
      return it == sub.end() ? t : it->second;
    }
    case Term::Kind::Cst:
      return t;
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(substitute(a, sub));
      return app(t->sym, std::move(args));
    }
  }
  return t;
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem)) return stem;
  std::string cand = stem + "'";
  while (used.count(cand)) cand += "'";
  return cand;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return eq(substitute(f->terms[0], sub), substitute(f->terms[1], sub));
    case Formula::Kind::Card:
      return atcard(f->k, substitute(f->terms[0], sub));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::map<std::string, TermPtr> inner = sub;
      inner.erase(f->bound);
      // rename the bound variable when a substituted term would capture it
      std::set<std::string> incoming;
      auto fv = free_variables(f->sub[0]);
      for (const auto& [name, repl] : inner) {
        if (!fv.count(name)) continue;
        auto tv = term_vars(repl);
        incoming.insert(tv.begin(), tv.end());
      }
      std::string bv = f->bound;
      FormulaPtr body = f->sub[0];
      if (incoming.count(bv)) {
        std::set<std::string> avoid = incoming;
        auto av = all_variables(body);
        avoid.insert(av.begin(), av.end());
        std::string nb = fresh_name(bv, avoid);
        body = substitute(body, {{bv, var(nb)}});
        bv = nb;
      }
      body = substitute(body, inner);
      return f->kind == Formula::Kind::Exists ? exists(bv, body) : forall(bv, body);
    }
    default: {
      auto g = std::make_shared<Formula>();
      g->kind = f->kind;
      for (const auto& s : f->sub) g->sub.push_back(substitute(s, sub));
      return g;
    }
  }
}

static FormulaPtr normalize_rec(const FormulaPtr& f,
                                std::map<std::string, TermPtr>& renaming,
                                int& counter) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return eq(substitute(f->terms[0], renaming), substitute(f->terms[1], renaming));
    case Formula::Kind::Card:
      return atcard(f->k, substitute(f->terms[0], renaming));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string nb = "v" + std::to_string(counter++);
      auto saved = renaming.find(f->bound);
      TermPtr old = saved == renaming.end() ? nullptr : saved->second;
      renaming[f->bound] = var(nb);
      FormulaPtr body = normalize_rec(f->sub[0], renaming, counter);
      if (old) renaming[f->bound] = old; else renaming.erase(f->bound);
      return f->kind == Formula::Kind::Exists ? exists(nb, body) : forall(nb, body);
    }
    default: {
      auto g = std::make_shared<Formula>();
      g->kind = f->kind;
      for (const auto& s : f->sub) g->sub.push_back(normalize_rec(s, renaming, counter));
      return g;
    }
  }
}

FormulaPtr normalize_bound(const FormulaPtr& f) {
  std::map<std::string, TermPtr> renaming;
  int counter = 0;
  return normalize_rec(f, renaming, counter);
}

bool normalized_equal(const FormulaPtr& a, const FormulaPtr& b) {
  return struct_equal(normalize_bound(a), normalize_bound(b));
}

bool is_atomic(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Eq || f->kind == Formula::Kind::Card;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) return false;
  for (const auto& s : f->sub)
    if (!is_quantifier_free(s)) return false;
  return true;
}

int quantifier_count(const FormulaPtr& f) {
  int n = (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) ? 1 : 0;
  for (const auto& s : f->sub) n += quantifier_count(s);
  return n;
}

int max_card_index(const FormulaPtr& f) {
  int m = f->kind == Formula::Kind::Card ? f->k : 0;
  for (const auto& s : f->sub) m = std::max(m, max_card_index(s));
  return m;
}

} // namespace fvkit
