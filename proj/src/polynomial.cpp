#include "fvkit/polynomial.hpp"

#include "fvkit/parser.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fvkit {

static int mono_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da > db;
  return a < b;
}

Polynomial Polynomial::constant(long long c) {
  Polynomial p;
  if (c != 0) p.coeffs_[{}] = c;
  return p;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.coeffs_[{{name, 1}}] = 1;
  return p;
}

void Polynomial::set(const Monomial& m, long long c) {
  if (c == 0)
    coeffs_.erase(m);
  else
    coeffs_[m] = c;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.coeffs_) {
    long long nc = c;
    auto it = r.coeffs_.find(m);
    if (it != r.coeffs_.end()) nc += it->second;
    r.set(m, nc);
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [m, c] : coeffs_) r.coeffs_[m] = -c;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ma, ca] : coeffs_)
    for (const auto& [mb, cb] : o.coeffs_) {
      Monomial m = mono_mul(ma, mb);
      long long nc = ca * cb;
      auto it = r.coeffs_.find(m);
      if (it != r.coeffs_.end()) nc += it->second;
      r.set(m, nc);
    }
  return r;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : coeffs_) d = std::max(d, mono_degree(m));
  return d;
}

std::vector<std::string> Polynomial::variables() const {
  std::set<std::string> vs;
  for (const auto& [m, c] : coeffs_)
    for (const auto& [v, e] : m) vs.insert(v);
  return {vs.begin(), vs.end()};
}

Polynomial term_to_polynomial(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return Polynomial::variable(t->sym);
    case Term::Kind::Cst:
      return Polynomial::constant(std::stoll(t->sym));
    case Term::Kind::App:
      if (t->sym == "+") return term_to_polynomial(t->args[0]) + term_to_polynomial(t->args[1]);
      if (t->sym == "*") return term_to_polynomial(t->args[0]) * term_to_polynomial(t->args[1]);
      if (t->sym == "-") return -term_to_polynomial(t->args[0]);
      throw std::invalid_argument("not a ring term: " + t->sym);
  }
  return {};
}

static TermPtr mono_term(const Monomial& m, long long coeff) {
  TermPtr acc;
  long long a = coeff < 0 ? -coeff : coeff;
  if (a != 1 || m.empty()) acc = cst(a);
  for (const auto& [v, e] : m)
    for (int i = 0; i < e; ++i) acc = acc ? rmul(acc, var(v)) : var(v);
  if (coeff < 0) acc = rneg(acc);
  return acc;
}

TermPtr polynomial_to_term(const Polynomial& p) {
  if (p.is_zero()) return cst(0);
  TermPtr acc;
  for (const auto& [m, c] : p.terms()) {
    TermPtr t = mono_term(m, c);
    acc = acc ? radd(acc, t) : t;
  }
  return acc;
}

Polynomial atomic_to_polynomial(const FormulaPtr& f) {
  if (f->kind != Formula::Kind::Eq)
    throw std::invalid_argument("expected a ring equation");
  return term_to_polynomial(f->terms[0]) - term_to_polynomial(f->terms[1]);
}

FormulaPtr polynomial_eq_zero(const Polynomial& p) {
  return eq(polynomial_to_term(p), cst(0));
}

std::string render_polynomial(const Polynomial& p) {
  return render_term(polynomial_to_term(p));
}

} // namespace fvkit
