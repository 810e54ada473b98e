#pragma once

#include "fvkit/polynomial.hpp"

#include <optional>
#include <vector>

namespace fvkit {

// (p, n) with q = p^n, or nullopt when q is not a prime power >= 2.
std::optional<std::pair<int, int>> prime_power(long long q);

std::vector<int> prime_powers_up_to(int bound);

// Lexicographically least monic irreducible polynomial of degree n over F_p,
// as coefficients c[0..n] (c[i] the coefficient of x^i, c[n] = 1). Least
// means: smallest value of sum c[i] * p^i over the non-leading coefficients.
std::vector<int> irreducible_coeffs(int p, int n, long long size_bound = 1 << 20);

Polynomial irreducible_polynomial(int p, int n, long long size_bound = 1 << 20);

// Arithmetic in F_{p^n}. Elements are 0..q-1; the base-p digits of an element
// are the coefficients of its residue polynomial modulo the deterministic
// irreducible modulus above (constant digit least significant).
class GaloisField {
public:
  explicit GaloisField(long long q);

  int p() const { return p_; }
  int n() const { return n_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  int add(int a, int b) const;
  int neg(int a) const;
  int mul(int a, int b) const;
  int inv(int a) const; // a != 0
  int pow(int a, long long e) const;
  int from_int(long long v) const; // v * 1, i.e. v mod p embedded
  int frobenius(int a) const { return pow(a, p_); }

  // Evaluate an integer-coefficient polynomial at an assignment of field
  // elements to its variables.
  int eval(const Polynomial& poly, const std::map<std::string, int>& asg) const;

private:
  int p_, n_, q_;
  std::vector<int> modulus_;
  std::vector<int> to_digits(int a) const;
  int from_digits(const std::vector<int>& d) const;
};

} // namespace fvkit
