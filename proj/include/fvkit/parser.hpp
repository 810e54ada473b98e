#pragma once

#include "fvkit/ast.hpp"

#include <string>

namespace fvkit {

// Concrete grammar (ASCII, LL(1)):
//   formula := iff
//   iff     := impl ("<->" impl)*
//   impl    := or ("->" or)*            (right associative)
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | quant | "(" formula ")" | atom
//   quant   := ("E"|"A") ident "." formula      (body extends maximally)
//   atom    := term "=" term | "Atl[" int "](" term ")"
//   term    := mul (("+"|"-") mul)*
//   mul     := tunary ("*" tunary)*
//   tunary  := "-" tunary | number | ident | "(" term ")"
//            | "meet(" term "," term ")" | "join(" term "," term ")"
//            | "comp(" term ")"
// Ring flavor forbids meet/join/comp/Atl; Boolean flavor restricts numerals
// to 0 and 1.
FormulaPtr parse_formula(const std::string& text, const Signature& sig);
TermPtr parse_term(const std::string& text, const Signature& sig);

std::string render_term(const TermPtr& t);
std::string render_formula(const FormulaPtr& f);

} // namespace fvkit
