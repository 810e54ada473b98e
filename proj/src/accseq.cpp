#include "fvkit/accseq.hpp"

#include "fvkit/parser.hpp"

#include <json.hpp>

#include <stdexcept>

namespace fvkit {

std::string component_var(size_t i) { return "y" + std::to_string(i + 1); }

static bool term_uses(const TermPtr& t, bool boolean_syms) {
  if (t->kind == Term::Kind::App) {
    bool is_bool = t->sym == "meet" || t->sym == "join" || t->sym == "comp";
    if (is_bool == boolean_syms) return true;
  }
  for (const auto& a : t->args)
    if (term_uses(a, boolean_syms)) return true;
  return false;
}

static bool formula_uses(const FormulaPtr& f, bool boolean_syms) {
  if (f->kind == Formula::Kind::Card && boolean_syms) return true;
  for (const auto& t : f->terms)
    if (term_uses(t, boolean_syms)) return true;
  for (const auto& s : f->sub)
    if (formula_uses(s, boolean_syms)) return true;
  return false;
}

void check_acceptable(const AcceptableSequence& xi) {
  if (!xi.bool_formula) throw std::invalid_argument("missing Boolean formula");
  if (formula_uses(xi.bool_formula, /*boolean_syms=*/false))
    throw std::invalid_argument("ring symbol on the Boolean side");
  std::set<std::string> allowed;
  for (size_t i = 0; i < xi.components.size(); ++i) allowed.insert(component_var(i));
  for (const auto& v : free_variables(xi.bool_formula))
    if (!allowed.count(v))
      throw std::invalid_argument("Boolean side mentions unknown variable " + v);
  for (const auto& th : xi.components)
    if (formula_uses(th, /*boolean_syms=*/true))
      throw std::invalid_argument("Boolean symbol in a component formula");
}

bool evaluate_acceptable(const ProductStructure& P, const AcceptableSequence& xi,
                         const ProductAssignment& asg) {
  IndexSetAssignment ys;
  for (size_t i = 0; i < xi.components.size(); ++i)
    ys[component_var(i)] = k_set(P, xi.components[i], asg);
  return evaluate_powerset(static_cast<int>(P.factors.size()), xi.bool_formula, ys);
}

std::string acceptable_to_json(const AcceptableSequence& xi) {
  nlohmann::json j;
  j["bool"] = render_formula(xi.bool_formula);
  j["components"] = nlohmann::json::array();
  for (const auto& th : xi.components) j["components"].push_back(render_formula(th));
  return j.dump(2);
}

AcceptableSequence acceptable_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  AcceptableSequence xi;
  xi.bool_formula = parse_formula(j.at("bool").get<std::string>(), boolean_signature());
  for (const auto& c : j.at("components"))
    xi.components.push_back(parse_formula(c.get<std::string>(), ring_signature()));
  check_acceptable(xi);
  return xi;
}

} // namespace fvkit
