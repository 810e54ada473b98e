#include "fvkit/galois.hpp"

#include <stdexcept>

namespace fvkit {

static bool is_prime(long long v) {
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::optional<std::pair<int, int>> prime_power(long long q) {
  if (q < 2) return std::nullopt;
  for (long long p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    if (!is_prime(p)) return std::nullopt;
    int n = 0;
    long long r = q;
    while (r % p == 0) {
      r /= p;
      ++n;
    }
    if (r != 1) return std::nullopt;
    return std::make_pair(static_cast<int>(p), n);
  }
  return std::make_pair(static_cast<int>(q), 1); // q itself is prime
}

std::vector<int> prime_powers_up_to(int bound) {
  std::vector<int> out;
  for (int q = 2; q <= bound; ++q)
    if (prime_power(q)) out.push_back(q);
  return out;
}

// Multiply residue polynomials (base-p digit vectors) modulo a monic modulus.
static std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                                    const std::vector<int>& mod, int p) {
  int n = static_cast<int>(mod.size()) - 1;
  std::vector<int> prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<int>((prod[i + j] + 1LL * a[i] * b[j]) % p);
  for (int d = static_cast<int>(prod.size()) - 1; d >= n; --d) {
    int c = prod[d];
    if (!c) continue;
    prod[d] = 0;
    for (int i = 0; i < n; ++i)
      prod[d - n + i] = static_cast<int>(((prod[d - n + i] - 1LL * c * mod[i]) % p + p) % p);
  }
  prod.resize(n);
  return prod;
}

static bool poly_is_zero(const std::vector<int>& a) {
  for (int c : a)
    if (c) return false;
  return true;
}

// Irreducibility over F_p by the Rabin test: x^(p^n) == x mod f, and for each
// prime divisor r of n, gcd(x^(p^(n/r)) - x, f) == 1. For the small degrees
// here plain trial division by all monic polynomials of degree <= n/2 is
// simpler and fast enough.
static bool divides(const std::vector<int>& divisor, std::vector<int> rem, int p) {
  int dd = static_cast<int>(divisor.size()) - 1;
  for (int d = static_cast<int>(rem.size()) - 1; d >= dd; --d) {
    int c = rem[d];
    if (!c) continue;
    // divisor is monic
    for (int i = 0; i <= dd; ++i)
      rem[d - dd + i] = static_cast<int>(((rem[d - dd + i] - 1LL * c * divisor[i]) % p + p) % p);
  }
  return poly_is_zero(rem);
}

static bool irreducible_over(const std::vector<int>& f, int p) {
  int n = static_cast<int>(f.size()) - 1;
  // enumerate monic divisors of degree 1..n/2
  for (int d = 1; 2 * d <= n; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      std::vector<int> g(d + 1, 0);
      long long c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<int>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (divides(g, f, p)) return false;
    }
  }
  return true;
}

std::vector<int> irreducible_coeffs(int p, int n, long long size_bound) {
  if (n < 1) throw std::invalid_argument("degree must be positive");
  long long q = 1;
  for (int i = 0; i < n; ++i) {
    q *= p;
    if (q > size_bound) throw BoundExceeded("field size exceeds bound");
  }
  if (n == 1) return {0, 1}; // x itself; arithmetic is just mod p
  for (long long code = 0; code < q; ++code) {
    std::vector<int> f(n + 1, 0);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    f[n] = 1;
    if (irreducible_over(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found"); // unreachable
}

Polynomial irreducible_polynomial(int p, int n, long long size_bound) {
  std::vector<int> f = irreducible_coeffs(p, n, size_bound);
  Polynomial out;
  for (int i = 0; i <= n; ++i) {
    if (!f[i]) continue;
    Monomial m;
    if (i > 0) m = {{"t", i}};
    out.set(m, f[i]);
  }
  return out;
}

GaloisField::GaloisField(long long q) {
  auto pn = prime_power(q);
  if (!pn) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  p_ = pn->first;
  n_ = pn->second;
  q_ = static_cast<int>(q);
  modulus_ = irreducible_coeffs(p_, n_);
}

std::vector<int> GaloisField::to_digits(int a) const {
  std::vector<int> d(n_, 0);
  for (int i = 0; i < n_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

int GaloisField::from_digits(const std::vector<int>& d) const {
  int v = 0;
  for (int i = n_ - 1; i >= 0; --i) v = v * p_ + d[i];
  return v;
}

int GaloisField::add(int a, int b) const {
  std::vector<int> da = to_digits(a), db = to_digits(b);
  for (int i = 0; i < n_; ++i) da[i] = (da[i] + db[i]) % p_;
  return from_digits(da);
}

int GaloisField::neg(int a) const {
  std::vector<int> d = to_digits(a);
  for (int& c : d) c = (p_ - c) % p_;
  return from_digits(d);
}

int GaloisField::mul(int a, int b) const {
  if (n_ == 1) return static_cast<int>(1LL * a * b % p_);
  return from_digits(poly_mulmod(to_digits(a), to_digits(b), modulus_, p_));
}

int GaloisField::pow(int a, long long e) const {
  int r = 1, base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

int GaloisField::inv(int a) const {
  if (a == 0) throw std::invalid_argument("zero has no inverse");
  return pow(a, q_ - 2);
}

int GaloisField::from_int(long long v) const {
  long long r = v % p_;
  if (r < 0) r += p_;
  return static_cast<int>(r);
}

int GaloisField::eval(const Polynomial& poly, const std::map<std::string, int>& asg) const {
  int acc = 0;
  for (const auto& [m, c] : poly.terms()) {
    int t = from_int(c);
    for (const auto& [v, e] : m) {
      auto it = asg.find(v);
      if (it == asg.end()) throw std::invalid_argument("unassigned variable: " + v);
      t = mul(t, pow(it->second, e));
    }
    acc = add(acc, t);
  }
  return acc;
}

} // namespace fvkit
