#pragma once

#include "fvkit/ast.hpp"
#include "fvkit/galois.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fvkit {

// An explicit finite ring-signature structure given by tables. Element ids are
// dense integers 0..size-1; 0 and 1 interpret the constants.
struct FiniteStructure {
  std::string label;
  int size = 0;
  std::vector<std::vector<int>> add_table;
  std::vector<std::vector<int>> mul_table;
  std::vector<int> neg_table;
  int characteristic = 0;

  int add(int a, int b) const { return add_table[a][b]; }
  int mul(int a, int b) const { return mul_table[a][b]; }
  int neg(int a) const { return neg_table[a]; }
  int constant(long long v) const; // v * 1 in the structure
};

// The field of order q (prime power), with elements encoded as in GaloisField.
// Verifies characteristic and existence of inverses on construction.
FiniteStructure finite_field(long long q, long long size_bound = 1 << 20);

// One element of a direct product: coordinate per factor, in label order.
using ProductElement = std::vector<int>;

// Subset of the label positions of a product, as a bitmask.
using IndexSet = std::uint64_t;

struct ProductStructure {
  std::vector<std::string> labels;
  std::vector<FiniteStructure> factors;

  size_t arity() const { return labels.size(); }
  long long universe_size() const;
  // Enumerates the universe in lexicographic coordinate order.
  std::vector<ProductElement> universe() const;

  ProductElement constant(long long v) const;
  ProductElement add(const ProductElement& a, const ProductElement& b) const;
  ProductElement mul(const ProductElement& a, const ProductElement& b) const;
  ProductElement neg(const ProductElement& a) const;

  int label_index(const std::string& label) const; // -1 when absent
};

ProductStructure direct_product(const std::vector<FiniteStructure>& factors);

// Product of F_q for the listed prime powers, labels "F2", "F3", ...
ProductStructure field_product(const std::vector<int>& qs);

// The image of an integer under the diagonal embedding n -> (n*1, ..., n*1).
ProductElement integer_image(const ProductStructure& P, long long n);

// A tuple of product elements (an assignment to x1..xn in some fixed order).
using PointTuple = std::vector<ProductElement>;

// Projection of a point tuple to one factor: (a1(l), ..., an(l)).
std::vector<int> tuple_at(const PointTuple& a, int label_pos);

struct CylinderSpec {
  std::vector<int> positions;          // label positions, subset of the product
  std::vector<std::vector<int>> base;  // per listed position: an n-tuple of
                                       // factor elements the witnesses must match
};

std::string render_index_set(const ProductStructure& P, IndexSet s);

} // namespace fvkit
