#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvkit {

// Two term/formula flavors share one AST. Ring formulas use 0,1,+,*,unary -
// and equality; Boolean-algebra formulas use 0,1,meet,join,comp, equality and
// the cardinality predicates A_k (written Atl[k] in concrete syntax).
enum class Flavor { Ring, Boolean };

struct Signature {
  std::string name;
  Flavor flavor;
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::pair<std::string, int>> relations;
};

const Signature& ring_signature();
const Signature& boolean_signature();

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Cst, App };
  Kind kind;
  std::string sym;            // variable name, decimal literal, or function symbol
  std::vector<TermPtr> args;
};

TermPtr var(const std::string& name);
TermPtr cst(long long value);
TermPtr app(const std::string& sym, std::vector<TermPtr> args);

// Ring term builders.
TermPtr radd(TermPtr a, TermPtr b);
TermPtr rmul(TermPtr a, TermPtr b);
TermPtr rneg(TermPtr a);
TermPtr rsub(TermPtr a, TermPtr b);

// Boolean term builders.
TermPtr bmeet(TermPtr a, TermPtr b);
TermPtr bjoin(TermPtr a, TermPtr b);
TermPtr bcomp(TermPtr a);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Eq, Card, Not, And, Or, Implies, Iff, Exists, Forall };
  Kind kind;
  int k = 0;                   // Card: threshold of A_k
  std::string bound;           // Exists/Forall: bound variable
  std::vector<TermPtr> terms;  // Eq: {lhs, rhs}; Card: {arg}
  std::vector<FormulaPtr> sub; // connective/quantifier children
};

FormulaPtr eq(TermPtr a, TermPtr b);
FormulaPtr atcard(int k, TermPtr t);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr limplies(FormulaPtr a, FormulaPtr b);
FormulaPtr liff(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(const std::string& v, FormulaPtr body);
FormulaPtr forall(const std::string& v, FormulaPtr body);
FormulaPtr conj(const std::vector<FormulaPtr>& fs); // empty -> 0=0
FormulaPtr disj(const std::vector<FormulaPtr>& fs); // empty -> ~(0=0)
FormulaPtr truth();
FormulaPtr falsity();

bool term_equal(const TermPtr& a, const TermPtr& b);
bool struct_equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> term_vars(const TermPtr& t);
std::set<std::string> free_variables(const FormulaPtr& f);
std::set<std::string> all_variables(const FormulaPtr& f);

// Capture-avoiding simultaneous substitution of terms for free variables.
TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub);
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub);

// Renames bound variables to v0, v1, ... in traversal order; makes structural
// equality meaningful across alpha-equivalent formulas.
FormulaPtr normalize_bound(const FormulaPtr& f);
bool normalized_equal(const FormulaPtr& a, const FormulaPtr& b);

bool is_atomic(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);
int quantifier_count(const FormulaPtr& f);
int max_card_index(const FormulaPtr& f); // 0 if no A_k occurs

std::string fresh_name(const std::string& stem, const std::set<std::string>& used);

struct SyntaxError : std::runtime_error {
  size_t position;
  SyntaxError(const std::string& msg, size_t pos)
      : std::runtime_error(msg), position(pos) {}
};

struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace fvkit
