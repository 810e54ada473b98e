#include "fvkit/eval.hpp"

#include <bit>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace fvkit {

int evaluate_term(const FiniteStructure& s, const TermPtr& t, const Assignment& asg) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = asg.find(t->sym);
      if (it == asg.end()) throw std::invalid_argument("unassigned variable: " + t->sym);
      return it->second;
    }
    case Term::Kind::Cst:
      return s.constant(std::stoll(t->sym));
    case Term::Kind::App: {
      if (t->sym == "+")
        return s.add(evaluate_term(s, t->args[0], asg), evaluate_term(s, t->args[1], asg));
      if (t->sym == "*")
        return s.mul(evaluate_term(s, t->args[0], asg), evaluate_term(s, t->args[1], asg));
      if (t->sym == "-") return s.neg(evaluate_term(s, t->args[0], asg));
      throw std::invalid_argument("not a ring symbol: " + t->sym);
    }
  }
  return 0;
}

static bool eval_rec(const FiniteStructure& s, const FormulaPtr& f, Assignment& asg) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return evaluate_term(s, f->terms[0], asg) == evaluate_term(s, f->terms[1], asg);
    case Formula::Kind::Card:
      throw std::invalid_argument("Atl has no meaning in a ring structure");
    case Formula::Kind::Not:
      return !eval_rec(s, f->sub[0], asg);
    case Formula::Kind::And:
      return eval_rec(s, f->sub[0], asg) && eval_rec(s, f->sub[1], asg);
    case Formula::Kind::Or:
      return eval_rec(s, f->sub[0], asg) || eval_rec(s, f->sub[1], asg);
    case Formula::Kind::Implies:
      return !eval_rec(s, f->sub[0], asg) || eval_rec(s, f->sub[1], asg);
    case Formula::Kind::Iff:
      return eval_rec(s, f->sub[0], asg) == eval_rec(s, f->sub[1], asg);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool ex = f->kind == Formula::Kind::Exists;
      auto it = asg.find(f->bound);
      std::optional<int> saved;
      if (it != asg.end()) saved = it->second;
      bool result = !ex;
      for (int c = 0; c < s.size; ++c) {
        asg[f->bound] = c;
        bool v = eval_rec(s, f->sub[0], asg);
        if (v == ex) {
          result = ex;
          break;
        }
      }
      if (saved)
        asg[f->bound] = *saved;
      else
        asg.erase(f->bound);
      return result;
    }
  }
  return false;
}

bool evaluate(const FiniteStructure& s, const FormulaPtr& f, const Assignment& asg) {
  Assignment a = asg;
  return eval_rec(s, f, a);
}

namespace {

class ProductEvaluator {
public:
  ProductEvaluator(const ProductStructure& P, long long bound) : P_(P), bound_(bound) {}

  bool eval(const FormulaPtr& f, ProductAssignment& asg) {
    switch (f->kind) {
      case Formula::Kind::Eq:
        return term(f->terms[0], asg) == term(f->terms[1], asg);
      case Formula::Kind::Card:
        throw std::invalid_argument("Atl has no meaning in a ring structure");
      case Formula::Kind::Not:
        return !eval(f->sub[0], asg);
      case Formula::Kind::And:
        return eval(f->sub[0], asg) && eval(f->sub[1], asg);
      case Formula::Kind::Or:
        return eval(f->sub[0], asg) || eval(f->sub[1], asg);
      case Formula::Kind::Implies:
        return !eval(f->sub[0], asg) || eval(f->sub[1], asg);
      case Formula::Kind::Iff:
        return eval(f->sub[0], asg) == eval(f->sub[1], asg);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        return quantified(f, asg);
    }
    return false;
  }

private:
  bool quantified(const FormulaPtr& f, ProductAssignment& asg) {
    const Formula* key = f.get();
    std::string state = encode(key, asg);
    auto& slot = memo_[key];
    auto hit = slot.find(state);
    if (hit != slot.end()) return hit->second;

    if (P_.universe_size() > bound_)
      throw BoundExceeded("quantifier enumeration bound exceeded");
    if (univ_.empty()) univ_ = P_.universe();

    bool ex = f->kind == Formula::Kind::Exists;
    auto it = asg.find(f->bound);
    std::optional<ProductElement> saved;
    if (it != asg.end()) saved = it->second;
    bool result = !ex;
    for (const auto& c : univ_) {
      asg[f->bound] = c;
      if (eval(f->sub[0], asg) == ex) {
        result = ex;
        break;
      }
    }
    if (saved)
      asg[f->bound] = *saved;
    else
      asg.erase(f->bound);
    slot.emplace(std::move(state), result);
    return result;
  }

  std::string encode(const Formula* key, const ProductAssignment& asg) {
    auto it = fv_.find(key);
    if (it == fv_.end()) {
      FormulaPtr alias(key, [](const Formula*) {}); // non-owning view
      it = fv_.emplace(key, free_variables(alias)).first;
    }
    std::string out;
    for (const auto& v : it->second) {
      auto a = asg.find(v);
      if (a == asg.end()) throw std::invalid_argument("unassigned variable: " + v);
      for (int c : a->second) {
        out += std::to_string(c);
        out += ',';
      }
      out += ';';
    }
    return out;
  }

  const ProductStructure& P_;
  long long bound_;
  std::vector<ProductElement> univ_;
  std::unordered_map<const Formula*, std::set<std::string>> fv_;
  std::unordered_map<const Formula*, std::unordered_map<std::string, bool>> memo_;

  ProductElement term(const TermPtr& t, const ProductAssignment& asg) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = asg.find(t->sym);
        if (it == asg.end()) throw std::invalid_argument("unassigned variable: " + t->sym);
        return it->second;
      }
      case Term::Kind::Cst:
        return P_.constant(std::stoll(t->sym));
      case Term::Kind::App: {
        if (t->sym == "+") return P_.add(term(t->args[0], asg), term(t->args[1], asg));
        if (t->sym == "*") return P_.mul(term(t->args[0], asg), term(t->args[1], asg));
        if (t->sym == "-") return P_.neg(term(t->args[0], asg));
        throw std::invalid_argument("not a ring symbol: " + t->sym);
      }
    }
    return {};
  }
};

} // namespace

bool evaluate_product(const ProductStructure& P, const FormulaPtr& f,
                      const ProductAssignment& asg, long long enum_bound) {
  ProductEvaluator ev(P, enum_bound);
  ProductAssignment a = asg;
  return ev.eval(f, a);
}

IndexSet k_set(const ProductStructure& P, const FormulaPtr& theta,
               const ProductAssignment& asg) {
  IndexSet s = 0;
  for (size_t i = 0; i < P.factors.size(); ++i) {
    Assignment local;
    for (const auto& [v, e] : asg) local[v] = e[i];
    if (evaluate(P.factors[i], theta, local)) s |= IndexSet{1} << i;
  }
  return s;
}

IndexSet evaluate_powerset_term(int num_labels, const TermPtr& t,
                                const IndexSetAssignment& asg) {
  IndexSet full = num_labels >= 64 ? ~IndexSet{0} : (IndexSet{1} << num_labels) - 1;
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = asg.find(t->sym);
      if (it == asg.end()) throw std::invalid_argument("unassigned variable: " + t->sym);
      return it->second & full;
    }
    case Term::Kind::Cst:
      if (t->sym == "0") return 0;
      if (t->sym == "1") return full;
      throw std::invalid_argument("Boolean constants are 0 and 1 only");
    case Term::Kind::App: {
      if (t->sym == "meet")
        return evaluate_powerset_term(num_labels, t->args[0], asg) &
               evaluate_powerset_term(num_labels, t->args[1], asg);
      if (t->sym == "join")
        return evaluate_powerset_term(num_labels, t->args[0], asg) |
               evaluate_powerset_term(num_labels, t->args[1], asg);
      if (t->sym == "comp")
        return ~evaluate_powerset_term(num_labels, t->args[0], asg) & full;
      throw std::invalid_argument("not a Boolean symbol: " + t->sym);
    }
  }
  return 0;
}

static bool powerset_rec(int n, const FormulaPtr& f, IndexSetAssignment& asg,
                         int label_bound) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      return evaluate_powerset_term(n, f->terms[0], asg) ==
             evaluate_powerset_term(n, f->terms[1], asg);
    case Formula::Kind::Card:
      return std::popcount(evaluate_powerset_term(n, f->terms[0], asg)) >= f->k;
    case Formula::Kind::Not:
      return !powerset_rec(n, f->sub[0], asg, label_bound);
    case Formula::Kind::And:
      return powerset_rec(n, f->sub[0], asg, label_bound) &&
             powerset_rec(n, f->sub[1], asg, label_bound);
    case Formula::Kind::Or:
      return powerset_rec(n, f->sub[0], asg, label_bound) ||
             powerset_rec(n, f->sub[1], asg, label_bound);
    case Formula::Kind::Implies:
      return !powerset_rec(n, f->sub[0], asg, label_bound) ||
             powerset_rec(n, f->sub[1], asg, label_bound);
    case Formula::Kind::Iff:
      return powerset_rec(n, f->sub[0], asg, label_bound) ==
             powerset_rec(n, f->sub[1], asg, label_bound);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (n > label_bound) throw BoundExceeded("power-set enumeration bound exceeded");
      bool ex = f->kind == Formula::Kind::Exists;
      auto it = asg.find(f->bound);
      std::optional<IndexSet> saved;
      if (it != asg.end()) saved = it->second;
      IndexSet full = (IndexSet{1} << n) - 1;
      bool result = !ex;
      for (IndexSet s = 0; s <= full; ++s) {
        asg[f->bound] = s;
        if (powerset_rec(n, f->sub[0], asg, label_bound) == ex) {
          result = ex;
          break;
        }
        if (s == full) break;
      }
      if (saved)
        asg[f->bound] = *saved;
      else
        asg.erase(f->bound);
      return result;
    }
  }
  return false;
}

bool evaluate_powerset(int num_labels, const FormulaPtr& phi,
                       const IndexSetAssignment& asg, int label_bound) {
  IndexSetAssignment a = asg;
  return powerset_rec(num_labels, phi, a, label_bound);
}

std::optional<MixingWitness> mixing_witness(
    const ProductStructure& P, int arity,
    const std::function<bool(const PointTuple&)>& member, const CylinderSpec& cyl,
    long long budget, std::uint64_t seed) {
  size_t m = P.factors.size();
  for (int pos : cyl.positions)
    if (pos < 0 || static_cast<size_t>(pos) >= m)
      throw std::invalid_argument("cylinder position outside the product");
  if (cyl.base.size() != cyl.positions.size())
    throw std::invalid_argument("cylinder base/position length mismatch");

  std::vector<bool> fixed(m, false);
  for (size_t j = 0; j < cyl.positions.size(); ++j) {
    fixed[cyl.positions[j]] = true;
    if (cyl.base[j].size() != static_cast<size_t>(arity))
      throw std::invalid_argument("cylinder tuple arity mismatch");
    for (int v : cyl.base[j])
      if (v < 0 || v >= P.factors[cyl.positions[j]].size)
        throw std::invalid_argument("cylinder value outside the factor");
  }

  // free coordinates: (component, position) pairs not pinned by the cylinder
  std::vector<std::pair<int, int>> free_coords;
  long long space = 1;
  bool overflow = false;
  for (int c = 0; c < arity; ++c)
    for (size_t i = 0; i < m; ++i)
      if (!fixed[i]) {
        free_coords.emplace_back(c, static_cast<int>(i));
        if (space > budget) overflow = true;
        if (!overflow) space *= P.factors[i].size;
        if (space > 4 * budget) overflow = true;
      }

  PointTuple base(arity, ProductElement(m, 0));
  for (size_t j = 0; j < cyl.positions.size(); ++j)
    for (int c = 0; c < arity; ++c) base[c][cyl.positions[j]] = cyl.base[j][c];

  std::optional<PointTuple> found_in, found_out;
  auto consider = [&](const PointTuple& t) {
    if (member(t)) {
      if (!found_in) found_in = t;
    } else if (!found_out) {
      found_out = t;
    }
    return found_in && found_out;
  };

  if (!overflow && space <= budget) {
    std::vector<int> digits(free_coords.size(), 0);
    for (;;) {
      PointTuple t = base;
      for (size_t d = 0; d < free_coords.size(); ++d)
        t[free_coords[d].first][free_coords[d].second] = digits[d];
      if (consider(t)) return MixingWitness{*found_in, *found_out};
      int d = static_cast<int>(digits.size()) - 1;
      while (d >= 0) {
        if (++digits[d] < P.factors[free_coords[d].second].size) break;
        digits[d] = 0;
        --d;
      }
      if (d < 0) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    for (long long trial = 0; trial < budget; ++trial) {
      PointTuple t = base;
      for (const auto& [c, i] : free_coords)
        t[c][i] = static_cast<int>(rng() % P.factors[i].size);
      if (consider(t)) return MixingWitness{*found_in, *found_out};
    }
  }
  return std::nullopt;
}

} // namespace fvkit
