#include "fvkit/parser.hpp"

#include <cctype>
#include <sstream>

namespace fvkit {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(&text) { advance(); }

  struct State {
    size_t pos;
    Token tok;
  };
  State save() const { return {pos_, tok_}; }
  void restore(const State& s) {
    pos_ = s.pos;
    tok_ = s.tok;
  }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at position " << tok_.pos;
    throw SyntaxError(os.str(), tok_.pos);
  }

private:
  void advance() {
    const std::string& text = *text_;
    while (pos_ < text.size() && std::isspace(static_cast<unsigned char>(text[pos_]))) ++pos_;
    tok_.pos = pos_;
    if (pos_ >= text.size()) {
      tok_ = {Token::Kind::End, "", pos_};
      return;
    }
    char c = text[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos_])) ||
              text[pos_] == '_' || text[pos_] == '\'')) ++pos_;
      tok_ = {Token::Kind::Ident, text.substr(start, pos_ - start), start};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text.size() && std::isdigit(static_cast<unsigned char>(text[pos_]))) ++pos_;
      tok_ = {Token::Kind::Number, text.substr(start, pos_ - start), start};
      return;
    }
    // multi-char operators first
    if (text.compare(pos_, 3, "<->") == 0) {
      tok_ = {Token::Kind::Punct, "<->", pos_};
      pos_ += 3;
      return;
    }
    if (text.compare(pos_, 2, "->") == 0) {
      tok_ = {Token::Kind::Punct, "->", pos_};
      pos_ += 2;
      return;
    }
    static const std::string singles = "~&|=().,[]+-*";
    if (singles.find(c) != std::string::npos) {
      tok_ = {Token::Kind::Punct, std::string(1, c), pos_};
      ++pos_;
      return;
    }
    std::ostringstream os;
    os << "unexpected character '" << c << "' at position " << pos_;
    throw SyntaxError(os.str(), pos_);
  }

  const std::string* text_;
  size_t pos_ = 0;
  Token tok_;
};

bool is_reserved(const std::string& s) {
  return s == "E" || s == "A" || s == "meet" || s == "join" || s == "comp" || s == "Atl";
}

class Parser {
public:
  Parser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) {}

  FormulaPtr formula() {
    FormulaPtr f = iff();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
    return f;
  }

  TermPtr whole_term() {
    TermPtr t = term();
    if (lex_.peek().kind != Token::Kind::End) lex_.fail("trailing input");
    return t;
  }

private:
  bool punct(const std::string& p) {
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
      lex_.next();
      return true;
    }
    return false;
  }

  void expect(const std::string& p) {
    if (!punct(p)) lex_.fail("expected '" + p + "'");
  }

  FormulaPtr iff() {
    FormulaPtr f = impl();
    while (punct("<->")) f = liff(f, impl());
    return f;
  }

  FormulaPtr impl() {
    FormulaPtr f = disj();
    if (punct("->")) return limplies(f, impl());
    return f;
  }

  FormulaPtr disj() {
    FormulaPtr f = conjf();
    while (punct("|")) f = lor(f, conjf());
    return f;
  }

  FormulaPtr conjf() {
    FormulaPtr f = unary();
    while (punct("&")) f = land(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (punct("~")) return lnot(unary());
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident && (t.text == "E" || t.text == "A")) {
      bool ex = t.text == "E";
      lex_.next();
      Token v = lex_.next();
      if (v.kind != Token::Kind::Ident || is_reserved(v.text))
        throw SyntaxError("expected variable after quantifier at position " +
                              std::to_string(v.pos), v.pos);
      expect(".");
      FormulaPtr body = iff();
      return ex ? exists(v.text, body) : forall(v.text, body);
    }
    if (t.kind == Token::Kind::Ident && t.text == "Atl") {
      lex_.next();
      expect("[");
      Token k = lex_.next();
      if (k.kind != Token::Kind::Number)
        throw SyntaxError("expected cardinality index at position " + std::to_string(k.pos), k.pos);
      int kv = std::stoi(k.text);
      if (kv < 1) throw SyntaxError("A_k requires k >= 1 at position " + std::to_string(k.pos), k.pos);
      expect("]");
      expect("(");
      if (sig_.flavor != Flavor::Boolean) lex_.fail("Atl is not a ring symbol");
      TermPtr arg = term();
      expect(")");
      return atcard(kv, arg);
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      // "(" begins either "(formula)" or an atom with a parenthesized lhs
      // term, e.g. "(x+1)*y = 0". Try the atom reading, backtrack on failure.
      Lexer::State mark = lex_.save();
      try {
        return atom();
      } catch (const SyntaxError&) {
        lex_.restore(mark);
      }
      expect("(");
      FormulaPtr inner = iff();
      expect(")");
      return inner;
    }
    return atom();
  }

  FormulaPtr atom() {
    TermPtr lhs = term();
    expect("=");
    TermPtr rhs = term();
    return eq(lhs, rhs);
  }

  TermPtr term() {
    TermPtr t = mul();
    for (;;) {
      if (punct("+")) {
        t = radd(t, mul());
      } else if (punct("-")) {
        t = radd(t, rneg(mul()));
      } else {
        break;
      }
    }
    return t;
  }

  TermPtr mul() {
    TermPtr t = tunary();
    while (punct("*")) t = rmul(t, tunary());
    return t;
  }

  TermPtr tunary() {
    if (punct("-")) return rneg(tunary());
    Token t = lex_.next();
    if (t.kind == Token::Kind::Number) {
      if (sig_.flavor == Flavor::Boolean && t.text != "0" && t.text != "1")
        throw SyntaxError("Boolean terms allow only constants 0 and 1, at position " +
                              std::to_string(t.pos), t.pos);
      return cst(std::stoll(t.text));
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "meet" || t.text == "join" || t.text == "comp") {
        if (sig_.flavor != Flavor::Boolean)
          throw SyntaxError("'" + t.text + "' is not a ring symbol, at position " +
                                std::to_string(t.pos), t.pos);
        expect("(");
        TermPtr a = term();
        if (t.text == "comp") {
          expect(")");
          return bcomp(a);
        }
        expect(",");
        TermPtr b = term();
        expect(")");
        return t.text == "meet" ? bmeet(a, b) : bjoin(a, b);
      }
      if (is_reserved(t.text))
        throw SyntaxError("reserved word '" + t.text + "' used as a term, at position " +
                              std::to_string(t.pos), t.pos);
      return var(t.text);
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      TermPtr inner = term();
      expect(")");
      return inner;
    }
    throw SyntaxError("expected a term at position " + std::to_string(t.pos), t.pos);
  }

  Lexer lex_;
  const Signature& sig_;
};

// Ring/Boolean symbol check after the minus-sign restriction: unary '-' only
// makes sense in the ring flavor.
void check_flavor_term(const TermPtr& t, const Signature& sig, const std::string& text) {
  if (t->kind == Term::Kind::App) {
    bool ring_op = t->sym == "+" || t->sym == "*" || t->sym == "-";
    if (ring_op && sig.flavor != Flavor::Ring)
      throw SyntaxError("'" + t->sym + "' is not a Boolean symbol", 0);
    for (const auto& a : t->args) check_flavor_term(a, sig, text);
  }
}

void check_flavor(const FormulaPtr& f, const Signature& sig, const std::string& text) {
  for (const auto& t : f->terms) check_flavor_term(t, sig, text);
  for (const auto& s : f->sub) check_flavor(s, sig, text);
}

} // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  FormulaPtr f = p.formula();
  check_flavor(f, sig, text);
  return f;
}

TermPtr parse_term(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  TermPtr t = p.whole_term();
  check_flavor_term(t, sig, text);
  return t;
}

namespace {

// term precedence: 0 sum, 1 product, 2 prefix/atomic
void rt(const TermPtr& t, int parent, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Cst:
      out += t->sym;
      return;
    case Term::Kind::App:
      if (t->sym == "+") {
        bool paren = parent > 0;
        if (paren) out += "(";
        rt(t->args[0], 0, out);
        // render x + -y as x - y
        if (t->args[1]->kind == Term::Kind::App && t->args[1]->sym == "-") {
          out += " - ";
          rt(t->args[1]->args[0], 1, out);
        } else {
          out += " + ";
          rt(t->args[1], 1, out);
        }
        if (paren) out += ")";
        return;
      }
      if (t->sym == "*") {
        bool paren = parent > 1;
        if (paren) out += "(";
        rt(t->args[0], 1, out);
        out += "*";
        rt(t->args[1], 2, out);
        if (paren) out += ")";
        return;
      }
      if (t->sym == "-") {
        out += "-";
        rt(t->args[0], 2, out);
        return;
      }
      out += t->sym;
      out += "(";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ", ";
        rt(t->args[i], 0, out);
      }
      out += ")";
      return;
  }
}

// formula precedence: 0 iff, 1 impl, 2 or, 3 and, 4 unary
void rf(const FormulaPtr& f, int parent, std::string& out) {
  switch (f->kind) {
    case Formula::Kind::Eq:
      rt(f->terms[0], 0, out);
      out += " = ";
      rt(f->terms[1], 0, out);
      return;
    case Formula::Kind::Card:
      out += "Atl[" + std::to_string(f->k) + "](";
      rt(f->terms[0], 0, out);
      out += ")";
      return;
    case Formula::Kind::Not:
      out += "~(";
      rf(f->sub[0], 0, out);
      out += ")";
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool paren = parent > 0;
      if (paren) out += "(";
      out += f->kind == Formula::Kind::Exists ? "E " : "A ";
      out += f->bound;
      out += ". ";
      rf(f->sub[0], 0, out);
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::Iff: {
      bool paren = parent > 0;
      if (paren) out += "(";
      rf(f->sub[0], 1, out);
      out += " <-> ";
      rf(f->sub[1], 1, out);
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::Implies: {
      bool paren = parent > 1;
      if (paren) out += "(";
      rf(f->sub[0], 2, out);
      out += " -> ";
      rf(f->sub[1], 1, out); // right associative
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::Or: {
      bool paren = parent > 2;
      if (paren) out += "(";
      rf(f->sub[0], 2, out);
      out += " | ";
      rf(f->sub[1], 3, out);
      if (paren) out += ")";
      return;
    }
    case Formula::Kind::And: {
      bool paren = parent > 3;
      if (paren) out += "(";
      rf(f->sub[0], 3, out);
      out += " & ";
      rf(f->sub[1], 4, out);
      if (paren) out += ")";
      return;
    }
  }
}

} // namespace

std::string render_term(const TermPtr& t) {
  std::string out;
  rt(t, 0, out);
  return out;
}

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  rf(f, 0, out);
  return out;
}

} // namespace fvkit
