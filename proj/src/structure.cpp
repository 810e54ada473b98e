#include "fvkit/structure.hpp"

#include <sstream>
#include <stdexcept>

namespace fvkit {

int FiniteStructure::constant(long long v) const {
  bool negate = v < 0;
  if (negate) v = -v;
  int acc = 0;
  v %= characteristic ? characteristic : size; // periodic with the characteristic
  for (long long i = 0; i < v; ++i) acc = add(acc, 1);
  return negate ? neg(acc) : acc;
}

FiniteStructure finite_field(long long q, long long size_bound) {
  if (q > size_bound) throw BoundExceeded("field size exceeds bound");
  GaloisField gf(q);
  FiniteStructure s;
  s.label = "F" + std::to_string(q);
  s.size = gf.q();
  s.add_table.assign(s.size, std::vector<int>(s.size));
  s.mul_table.assign(s.size, std::vector<int>(s.size));
  s.neg_table.assign(s.size, 0);
  for (int a = 0; a < s.size; ++a) {
    s.neg_table[a] = gf.neg(a);
    for (int b = 0; b < s.size; ++b) {
      s.add_table[a][b] = gf.add(a, b);
      s.mul_table[a][b] = gf.mul(a, b);
    }
  }
  s.characteristic = gf.p();
  // sanity: characteristic and inverses
  int acc = 0;
  for (int i = 0; i < gf.p(); ++i) acc = s.add(acc, 1);
  if (acc != 0) throw std::logic_error("characteristic check failed");
  for (int a = 1; a < s.size; ++a) {
    bool has_inv = false;
    for (int b = 1; b < s.size && !has_inv; ++b) has_inv = s.mul(a, b) == 1;
    if (!has_inv) throw std::logic_error("missing multiplicative inverse");
  }
  return s;
}

long long ProductStructure::universe_size() const {
  long long n = 1;
  for (const auto& f : factors) n *= f.size;
  return n;
}

std::vector<ProductElement> ProductStructure::universe() const {
  std::vector<ProductElement> out;
  out.reserve(static_cast<size_t>(universe_size()));
  ProductElement cur(factors.size(), 0);
  for (;;) {
    out.push_back(cur);
    int i = static_cast<int>(factors.size()) - 1;
    while (i >= 0) {
      if (++cur[i] < factors[i].size) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

ProductElement ProductStructure::constant(long long v) const {
  ProductElement e(factors.size());
  for (size_t i = 0; i < factors.size(); ++i) e[i] = factors[i].constant(v);
  return e;
}

ProductElement ProductStructure::add(const ProductElement& a, const ProductElement& b) const {
  ProductElement e(factors.size());
  for (size_t i = 0; i < factors.size(); ++i) e[i] = factors[i].add(a[i], b[i]);
  return e;
}

ProductElement ProductStructure::mul(const ProductElement& a, const ProductElement& b) const {
  ProductElement e(factors.size());
  for (size_t i = 0; i < factors.size(); ++i) e[i] = factors[i].mul(a[i], b[i]);
  return e;
}

ProductElement ProductStructure::neg(const ProductElement& a) const {
  ProductElement e(factors.size());
  for (size_t i = 0; i < factors.size(); ++i) e[i] = factors[i].neg(a[i]);
  return e;
}

int ProductStructure::label_index(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

ProductStructure direct_product(const std::vector<FiniteStructure>& factors) {
  if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
  ProductStructure P;
  for (const auto& f : factors) {
    std::string label = f.label;
    int suffix = 1;
    while (P.label_index(label) >= 0) label = f.label + "#" + std::to_string(++suffix);
    P.labels.push_back(label);
    P.factors.push_back(f);
  }
  return P;
}

ProductStructure field_product(const std::vector<int>& qs) {
  std::vector<FiniteStructure> fs;
  fs.reserve(qs.size());
  for (int q : qs) fs.push_back(finite_field(q));
  return direct_product(fs);
}

ProductElement integer_image(const ProductStructure& P, long long n) { return P.constant(n); }

std::vector<int> tuple_at(const PointTuple& a, int label_pos) {
  std::vector<int> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(e[label_pos]);
  return out;
}

std::string render_index_set(const ProductStructure& P, IndexSet s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (size_t i = 0; i < P.labels.size(); ++i) {
    if (!(s >> i & 1)) continue;
    if (!first) os << ",";
    os << P.labels[i];
    first = false;
  }
  os << "}";
  return os.str();
}

} // namespace fvkit
