#include "fvkit/prenex.hpp"

#include <deque>
#include <optional>

namespace fvkit {

FormulaPtr eliminate_arrows(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Implies:
      return lor(lnot(eliminate_arrows(f->sub[0])), eliminate_arrows(f->sub[1]));
    case Formula::Kind::Iff: {
      FormulaPtr a = eliminate_arrows(f->sub[0]);
      FormulaPtr b = eliminate_arrows(f->sub[1]);
      return land(lor(lnot(a), b), lor(lnot(b), a));
    }
    case Formula::Kind::Eq:
    case Formula::Kind::Card:
      return f;
    case Formula::Kind::Exists:
      return exists(f->bound, eliminate_arrows(f->sub[0]));
    case Formula::Kind::Forall:
      return forall(f->bound, eliminate_arrows(f->sub[0]));
    case Formula::Kind::Not:
      return lnot(eliminate_arrows(f->sub[0]));
    case Formula::Kind::And:
      return land(eliminate_arrows(f->sub[0]), eliminate_arrows(f->sub[1]));
    case Formula::Kind::Or:
      return lor(eliminate_arrows(f->sub[0]), eliminate_arrows(f->sub[1]));
  }
  return f;
}

static FormulaPtr nnf(const FormulaPtr& f, bool neg) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Card:
      return neg ? lnot(f) : f;
    case Formula::Kind::Not:
      return nnf(f->sub[0], !neg);
    case Formula::Kind::And: {
      FormulaPtr a = nnf(f->sub[0], neg), b = nnf(f->sub[1], neg);
      return neg ? lor(a, b) : land(a, b);
    }
    case Formula::Kind::Or: {
      FormulaPtr a = nnf(f->sub[0], neg), b = nnf(f->sub[1], neg);
      return neg ? land(a, b) : lor(a, b);
    }
    case Formula::Kind::Exists: {
      FormulaPtr b = nnf(f->sub[0], neg);
      return neg ? forall(f->bound, b) : exists(f->bound, b);
    }
    case Formula::Kind::Forall: {
      FormulaPtr b = nnf(f->sub[0], neg);
      return neg ? exists(f->bound, b) : forall(f->bound, b);
    }
    default:
      return nnf(eliminate_arrows(f), neg);
  }
}

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(eliminate_arrows(f), false); }

namespace {

struct QEntry {
  bool is_exists;
  std::string name;
};

struct Prenexed {
  std::deque<QEntry> prefix;
  FormulaPtr matrix;
};

class PrenexBuilder {
public:
  explicit PrenexBuilder(std::set<std::string> used) : used_(std::move(used)) {}

  Prenexed run(const FormulaPtr& f, std::optional<bool> prefer) {
    switch (f->kind) {
      case Formula::Kind::Eq:
      case Formula::Kind::Card:
      case Formula::Kind::Not: // NNF: negation sits on an atom
        return {{}, f};
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool ex = f->kind == Formula::Kind::Exists;
        std::string nb = fresh_name(f->bound, used_);
        used_.insert(nb);
        FormulaPtr body = nb == f->bound ? f->sub[0]
                                         : substitute(f->sub[0], {{f->bound, var(nb)}});
        Prenexed inner = run(body, ex);
        inner.prefix.push_front({ex, nb});
        return inner;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        Prenexed a = run(f->sub[0], prefer);
        Prenexed b = run(f->sub[1], prefer);
        Prenexed out;
        out.matrix = f->kind == Formula::Kind::And ? land(a.matrix, b.matrix)
                                                   : lor(a.matrix, b.matrix);
        std::vector<std::deque<QEntry>*> queues = {&a.prefix, &b.prefix};
        std::optional<bool> last = prefer;
        for (;;) {
          bool any = false;
          for (auto* q : queues) any |= !q->empty();
          if (!any) break;
          // extend the current block when possible
          bool pulled = false;
          if (last) {
            for (auto* q : queues) {
              while (!q->empty() && q->front().is_exists == *last) {
                out.prefix.push_back(q->front());
                q->pop_front();
                pulled = true;
              }
            }
          }
          if (pulled) continue;
          int heads_e = 0, heads_a = 0;
          for (auto* q : queues) {
            if (q->empty()) continue;
            (q->front().is_exists ? heads_e : heads_a)++;
          }
          last = heads_e >= heads_a && heads_e > 0 ? std::optional<bool>(true)
                                                   : std::optional<bool>(false);
        }
        return out;
      }
      default:
        // arrows should have been eliminated already
        return run(to_nnf(f), prefer);
    }
  }

private:
  std::set<std::string> used_;
};

} // namespace

FormulaPtr to_prenex(const FormulaPtr& f) {
  FormulaPtr g = to_nnf(f);
  PrenexBuilder builder(all_variables(g));
  Prenexed p = builder.run(g, std::nullopt);
  FormulaPtr out = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
    out = it->is_exists ? exists(it->name, out) : forall(it->name, out);
  return out;
}

bool word_matches_eae(const std::string& word) {
  size_t i = 0;
  while (i < word.size() && word[i] == 'E') ++i;
  while (i < word.size() && word[i] == 'A') ++i;
  while (i < word.size() && word[i] == 'E') ++i;
  return i == word.size();
}

static std::string prefix_word(const FormulaPtr& f) {
  std::string w;
  FormulaPtr g = to_prenex(f);
  while (g->kind == Formula::Kind::Exists || g->kind == Formula::Kind::Forall) {
    w += g->kind == Formula::Kind::Exists ? 'E' : 'A';
    g = g->sub[0];
  }
  return w;
}

static bool leaves_eae(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      for (const auto& s : f->sub)
        if (!leaves_eae(s)) return false;
      return true;
    }
    default:
      return word_matches_eae(prefix_word(f));
  }
}

ShapeReport quantifier_shape(const FormulaPtr& f) {
  return {prefix_word(f), leaves_eae(f)};
}

} // namespace fvkit
