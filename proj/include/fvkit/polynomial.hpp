#pragma once

#include "fvkit/ast.hpp"

#include <map>
#include <string>
#include <vector>

namespace fvkit {

// Exponent vector, sorted by variable name, no zero exponents.
using Monomial = std::vector<std::pair<std::string, int>>;

// Graded lexicographic: higher total degree first, ties broken by the
// variable/exponent sequence. Gives a deterministic expanded normal form.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
public:
  Polynomial() = default;
  static Polynomial constant(long long c);
  static Polynomial variable(const std::string& name);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }
  int total_degree() const;
  std::vector<std::string> variables() const;

  const std::map<Monomial, long long, MonomialOrder>& terms() const { return coeffs_; }
  void set(const Monomial& m, long long c);

private:
  std::map<Monomial, long long, MonomialOrder> coeffs_;
};

Polynomial term_to_polynomial(const TermPtr& t);
TermPtr polynomial_to_term(const Polynomial& p);

// s = t  ->  polynomial of s - t (the normalized "F = 0" form)
Polynomial atomic_to_polynomial(const FormulaPtr& f);
FormulaPtr polynomial_eq_zero(const Polynomial& p);

std::string render_polynomial(const Polynomial& p);

} // namespace fvkit
