#include "fvkit/accseq.hpp"
#include "fvkit/ba.hpp"
#include "fvkit/eval.hpp"
#include "fvkit/fv.hpp"
#include "fvkit/gen.hpp"
#include "fvkit/interp.hpp"
#include "fvkit/kiefe.hpp"
#include "fvkit/parser.hpp"
#include "fvkit/prenex.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

using namespace fvkit;
using nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitBound = 3;
constexpr int kExitCertificate = 4;
constexpr int kExitProvider = 5;

struct Options {
  std::string formula;
  std::string products = "F2xF3";
  std::string flavor = "ring";
  std::string json_path;
  std::uint64_t seed = 1;
  long long N = 3;
  long long M = 16;
  long long bound = kDefaultEnumBound;
  bool timing = false;
  int count = 500;
  std::string provider = "table";
};

std::vector<std::vector<int>> parse_products(const std::string& spec) {
  std::vector<std::vector<int>> out;
  std::string item;
  std::stringstream items(spec);
  while (std::getline(items, item, ',')) {
    std::vector<int> qs;
    std::string tok;
    std::stringstream factors(item);
    while (std::getline(factors, tok, 'x')) {
      if (tok.empty() || (tok[0] != 'F' && tok[0] != 'f'))
        throw std::invalid_argument("bad product spec: " + item);
      qs.push_back(std::stoi(tok.substr(1)));
    }
    if (!qs.empty()) out.push_back(qs);
  }
  if (out.empty()) throw std::invalid_argument("empty product spec");
  return out;
}

std::string product_name(const std::vector<int>& qs) {
  std::string s;
  for (size_t i = 0; i < qs.size(); ++i)
    s += (i ? "x" : "") + ("F" + std::to_string(qs[i]));
  return s;
}

// Exhaustive tuple list when small, otherwise seeded samples.
std::vector<ProductAssignment> assignments_for(
    const ProductStructure& P, const std::set<std::string>& vars,
    std::mt19937_64& rng, long long exhaustive_limit = 200, int samples = 200) {
  std::vector<ProductAssignment> out;
  std::vector<std::string> names(vars.begin(), vars.end());
  auto universe = P.universe();
  double space = 1;
  for (size_t i = 0; i < names.size(); ++i) space *= universe.size();
  if (space <= exhaustive_limit) {
    std::vector<size_t> idx(names.size(), 0);
    while (true) {
      ProductAssignment asg;
      for (size_t i = 0; i < names.size(); ++i) asg[names[i]] = universe[idx[i]];
      out.push_back(asg);
      size_t p = 0;
      while (p < idx.size() && ++idx[p] == universe.size()) idx[p++] = 0;
      if (p == idx.size()) break;
      if (names.empty()) break;
    }
    if (names.empty() && out.empty()) out.push_back({});
  } else {
    for (int s = 0; s < samples; ++s) {
      ProductAssignment asg;
      for (const auto& n : names)
        asg[n] = universe[rng() % universe.size()];
      out.push_back(asg);
    }
  }
  return out;
}

const Signature& flavor_sig(const std::string& flavor) {
  return flavor == "boolean" ? boolean_signature() : ring_signature();
}

json report_skeleton(const std::string& command, const Options& opt) {
  json r;
  r["schema"] = "fvkit-report/1";
  r["command"] = command;
  r["inputs"] = {{"formula", opt.formula}, {"products", opt.products},
                 {"seed", opt.seed},       {"N", opt.N},
                 {"M", opt.M},             {"bound", opt.bound}};
  return r;
}

void finish_report(json& r, const Options& opt,
                   std::chrono::steady_clock::time_point t0) {
  if (opt.timing)
    r["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  if (!opt.json_path.empty()) {
    std::ofstream out(opt.json_path);
    out << r.dump(2) << "\n";
  }
}

int cmd_parse(const Options& opt) {
  FormulaPtr f = parse_formula(opt.formula, flavor_sig(opt.flavor));
  std::string rendered = render_formula(f);
  FormulaPtr again = parse_formula(rendered, flavor_sig(opt.flavor));
  bool stable = struct_equal(f, again);
  std::printf("parsed: %s\nround-trip: %s\n", rendered.c_str(),
              stable ? "PASS" : "FAIL");
  json r = report_skeleton("parse", opt);
  r["outputs"] = {{"rendered", rendered}, {"round_trip", stable}};
  auto t0 = std::chrono::steady_clock::now();
  finish_report(r, opt, t0);
  return stable ? 0 : kExitCertificate;
}

int cmd_eval(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr f = parse_formula(opt.formula, flavor_sig(opt.flavor));
  json r = report_skeleton("eval", opt);
  json outs = json::array();
  std::mt19937_64 rng(opt.seed);
  for (const auto& qs : parse_products(opt.products)) {
    ProductStructure P = field_product(qs);
    auto vars = free_variables(f);
    auto asgs = assignments_for(P, vars, rng);
    int truths = 0;
    for (const auto& asg : asgs)
      if (evaluate_product(P, f, asg, opt.bound)) ++truths;
    std::printf("%s: %d/%zu assignments satisfy\n", product_name(qs).c_str(),
                truths, asgs.size());
    outs.push_back({{"product", product_name(qs)},
                    {"true", truths},
                    {"checked", asgs.size()}});
  }
  r["outputs"] = outs;
  finish_report(r, opt, t0);
  return 0;
}

int cmd_decompose(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr f = parse_formula(opt.formula, ring_signature());
  AcceptableSequence xi = decompose(f);
  check_acceptable(xi);
  std::string xi_json = acceptable_to_json(xi);
  std::printf("%s\n", xi_json.c_str());

  json r = report_skeleton("decompose", opt);
  r["outputs"] = {{"sequence", json::parse(xi_json)}};
  json certs = json::array();
  bool all_pass = true;
  std::mt19937_64 rng(opt.seed);
  for (const auto& qs : parse_products(opt.products)) {
    ProductStructure P = field_product(qs);
    AcceptableChecker check(P, xi);
    auto asgs = assignments_for(P, free_variables(f), rng);
    int pass = 0;
    json counter = nullptr;
    for (const auto& asg : asgs) {
      if (check(asg) == evaluate_product(P, f, asg, opt.bound)) {
        ++pass;
      } else if (counter.is_null()) {
        json tup = json::object();
        for (const auto& [k, v] : asg) tup[k] = v;
        counter = tup;
      }
    }
    bool ok = pass == static_cast<int>(asgs.size());
    all_pass = all_pass && ok;
    std::printf("certificate %s: %s (%d/%zu tuples)\n",
                product_name(qs).c_str(), ok ? "PASS" : "FAIL", pass,
                asgs.size());
    certs.push_back({{"product", product_name(qs)},
                     {"pass", ok},
                     {"checked", asgs.size()},
                     {"counterexample", counter}});
  }
  r["certificates"] = certs;
  finish_report(r, opt, t0);
  return all_pass ? 0 : kExitCertificate;
}

int cmd_tighten(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr f = parse_formula(opt.formula, ring_signature());
  std::vector<QECertificate> qecerts;
  TightDecomposition td = tighten(f, &qecerts);
  std::printf("%s\n", tight_to_json(td).c_str());
  bool shape = is_tight_shape(td.sigma);
  bool qe_ok = true;
  for (const auto& c : qecerts) qe_ok = qe_ok && c.passed;
  std::printf("syntactic scan: %s\noracle QE certificates: %s (%zu)\n",
              shape ? "PASS" : "FAIL", qe_ok ? "PASS" : "FAIL",
              qecerts.size());

  bool product_ok = true;
  std::mt19937_64 rng(opt.seed);
  json prods = json::array();
  for (const auto& qs : parse_products(opt.products)) {
    ProductStructure P = field_product(qs);
    auto asgs = assignments_for(P, free_variables(f), rng);
    int pass = 0;
    for (const auto& asg : asgs)
      if (evaluate_tight(P, td, asg) == evaluate_product(P, f, asg, opt.bound))
        ++pass;
    bool ok = pass == static_cast<int>(asgs.size());
    product_ok = product_ok && ok;
    std::printf("product certificate %s: %s (%d/%zu tuples)\n",
                product_name(qs).c_str(), ok ? "PASS" : "FAIL", pass,
                asgs.size());
    prods.push_back({{"product", product_name(qs)}, {"pass", ok}});
  }
  json r = report_skeleton("tighten", opt);
  r["outputs"] = {{"decomposition", json::parse(tight_to_json(td))},
                  {"shape_pass", shape},
                  {"qe_certificates", qecerts.size()},
                  {"qe_pass", qe_ok}};
  r["certificates"] = prods;
  finish_report(r, opt, t0);
  return shape && qe_ok && product_ok ? 0 : kExitCertificate;
}

int cmd_eae(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr f = parse_formula(opt.formula, ring_signature());
  KiefeProvider provider = default_table_provider(opt.N, opt.M);
  if (opt.provider == "false") {
    // Deliberately wrong equivalences; exercises the provider spot checks.
    provider = [](const FormulaPtr&) {
      return lnot(exists("t", eq(cst(0), cst(0))));
    };
  } else if (opt.provider != "table") {
    std::fprintf(stderr, "unknown provider: %s\n", opt.provider.c_str());
    return 1;
  }
  FormulaPtr red = reduce_to_eae(f, provider, opt.N, opt.M);
  std::string rendered = render_formula(red);
  ShapeReport shape = quantifier_shape(red);
  std::printf("%s\nshape: %s\n", rendered.c_str(),
              shape.eae_combination ? "PASS" : "FAIL");
  bool product_ok = true;
  std::mt19937_64 rng(opt.seed);
  for (const auto& qs : parse_products(opt.products)) {
    ProductStructure P = field_product(qs);
    auto asgs = assignments_for(P, free_variables(f), rng, 40, 20);
    int pass = 0;
    for (const auto& asg : asgs)
      if (evaluate_product(P, red, asg, opt.bound) ==
          evaluate_product(P, f, asg, opt.bound))
        ++pass;
    bool ok = pass == static_cast<int>(asgs.size());
    product_ok = product_ok && ok;
    std::printf("product certificate %s: %s (%d/%zu tuples)\n",
                product_name(qs).c_str(), ok ? "PASS" : "FAIL", pass,
                asgs.size());
  }
  json r = report_skeleton("eae", opt);
  r["outputs"] = {{"formula", rendered},
                  {"prefix_word", shape.word},
                  {"shape_pass", shape.eae_combination}};
  finish_report(r, opt, t0);
  return shape.eae_combination && product_ok ? 0 : kExitCertificate;
}

int cmd_interp(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr f = parse_formula(opt.formula, ring_signature());
  AcceptableSequence xi = decompose(f);
  FormulaPtr delta = define_acceptable(xi, idempotent_kit());
  std::string rendered = render_formula(delta);
  std::printf("%s\n", rendered.c_str());
  bool ok = true;
  std::mt19937_64 rng(opt.seed);
  for (const auto& qs : parse_products(opt.products)) {
    ProductStructure P = field_product(qs);
    auto asgs = assignments_for(P, free_variables(f), rng, 40, 20);
    int pass = 0;
    for (const auto& asg : asgs)
      if (evaluate_product(P, delta, asg, opt.bound) ==
          evaluate_product(P, f, asg, opt.bound))
        ++pass;
    bool p = pass == static_cast<int>(asgs.size());
    ok = ok && p;
    std::printf("definability certificate %s: %s (%d/%zu tuples)\n",
                product_name(qs).c_str(), p ? "PASS" : "FAIL", pass,
                asgs.size());
  }
  json r = report_skeleton("interp", opt);
  r["outputs"] = {{"formula", rendered}};
  finish_report(r, opt, t0);
  return ok ? 0 : kExitCertificate;
}

// ---- demos ------------------------------------------------------------

// The integer image inside F2x...xF11, with one extra coordinate standing in
// for the untruncated primes: X is the set of CRT images of n in [0, 2310)
// extended by n mod 13 in the tail slot. Any cylinder over the five real
// factors admits a point of X and, by perturbing only the tail, a point
// outside X.
int demo_copyz(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> primes = {2, 3, 5, 7, 11};
  const int tail = 13;
  ProductStructure P = field_product({2, 3, 5, 7, 11, 13});
  // Precomputed CRT table: mixed-radix residue index -> integer in [0, 2310).
  std::vector<int> crt(2310);
  for (int n = 0; n < 2310; ++n) {
    int idx = 0, w = 1;
    for (int p : primes) { idx += w * (n % p); w *= p; }
    crt[idx] = n;
  }
  auto member = [&](const PointTuple& a) {
    int idx = 0, w = 1;
    for (size_t i = 0; i < primes.size(); ++i) { idx += w * a[0][i]; w *= primes[i]; }
    return a[0][5] == crt[idx] % tail;
  };
  long long cases = 0, found = 0;
  json sample = nullptr;
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<int> pos;
    long long mprod = 1;
    for (int i = 0; i < 5; ++i)
      if (mask >> i & 1) { pos.push_back(i); mprod *= primes[i]; }
    for (long long c = 0; c < mprod; ++c) {
      CylinderSpec cyl;
      cyl.positions = pos;
      long long rest = c;
      for (int i : pos) {
        cyl.base.push_back({static_cast<int>(rest % primes[i])});
        rest /= primes[i];
      }
      ++cases;
      auto w = mixing_witness(P, 1, member, cyl, 1 << 20, opt.seed);
      if (w) {
        ++found;
        if (sample.is_null() && pos.size() == 2) {
          sample = {{"fixed", json::array()},
                    {"in_x", w->in_x[0]},
                    {"out_x", w->out_x[0]}};
          for (int i : pos) sample["fixed"].push_back(P.labels[i]);
        }
      }
    }
  }
  std::printf("copyz: witnesses for %lld/%lld (cylinder, value) cases\n", found,
              cases);
  json r = report_skeleton("demo", opt);
  r["outputs"] = {{"demo", "copyz"}, {"cases", cases}, {"witnesses", found},
                  {"sample", sample}};
  finish_report(r, opt, t0);
  return found == cases ? 0 : kExitCertificate;
}

// Finite-support set, emulated with an explicit tail factor: X is the set of
// elements whose tail coordinate is 0; cylinders range over the real factors.
int demo_direct_sum(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> primes = {2, 3, 5, 7, 11};
  ProductStructure P = field_product({2, 3, 5, 7, 11, 11});
  auto member = [&](const PointTuple& a) { return a[0][5] == 0; };
  long long cases = 0, found = 0;
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<int> pos;
    long long mprod = 1;
    for (int i = 0; i < 5; ++i)
      if (mask >> i & 1) { pos.push_back(i); mprod *= primes[i]; }
    for (long long c = 0; c < mprod; ++c) {
      CylinderSpec cyl;
      cyl.positions = pos;
      long long rest = c;
      for (int i : pos) {
        cyl.base.push_back({static_cast<int>(rest % primes[i])});
        rest /= primes[i];
      }
      ++cases;
      if (mixing_witness(P, 1, member, cyl, 1 << 20, opt.seed)) ++found;
    }
  }
  std::printf("direct_sum: witnesses for %lld/%lld (cylinder, value) cases\n",
              found, cases);
  json r = report_skeleton("demo", opt);
  r["outputs"] = {{"demo", "direct_sum"}, {"cases", cases}, {"witnesses", found}};
  finish_report(r, opt, t0);
  return found == cases ? 0 : kExitCertificate;
}

int demo_psi2(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaPtr psi2 = field_sentence_unstrengthened(2).formula;
  json rows = json::array();
  std::printf("unstrengthened Psi_2: %s\n", render_formula(psi2).c_str());
  for (int q : {2, 4, 8}) {
    bool v = holds_in_field(q, psi2);
    std::printf("  F%d: %s\n", q, v ? "true" : "false");
    rows.push_back({{"field", q}, {"holds", v}});
  }
  bool anomaly = holds_in_field(2, psi2) && !holds_in_field(4, psi2) &&
                 holds_in_field(8, psi2);
  std::printf("divergence (F8 satisfies the q=2 sentence): %s\n",
              anomaly ? "reproduced" : "NOT reproduced");
  json r = report_skeleton("demo", opt);
  r["outputs"] = {{"demo", "psi2_anomaly"}, {"table", rows},
                  {"anomaly", anomaly}};
  finish_report(r, opt, t0);
  return anomaly ? 0 : kExitCertificate;
}

int cmd_fuzz(const Options& opt) {
  auto t0 = std::chrono::steady_clock::now();
  FormulaGen gen(opt.seed);
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
  int decompose_pass = 0, qe_pass = 0, tighten_pass = 0;
  json failures = json::array();

  for (int i = 0; i < opt.count; ++i) {
    FormulaPtr f = gen.ring_formula();
    ProductStructure P = field_product(gen.random_product());
    AcceptableSequence xi = decompose(f);
    AcceptableChecker check(P, xi);
    auto asgs = assignments_for(P, free_variables(f), rng);
    bool ok = true;
    for (const auto& asg : asgs)
      if (check(asg) != evaluate_product(P, f, asg, opt.bound)) {
        ok = false;
        json tup = json::object();
        for (const auto& [k, v] : asg) tup[k] = v;
        failures.push_back({{"case", i},
                            {"kind", "decompose"},
                            {"formula", render_formula(f)},
                            {"product", P.labels},
                            {"tuple", tup}});
        break;
      }
    if (ok) ++decompose_pass;
  }

  int n_bool = opt.count / 5;
  for (int i = 0; i < n_bool; ++i) {
    FormulaPtr f = gen.boolean_formula(i % 3);
    FormulaPtr elim = ba_eliminate_quantifiers(f);
    bool ok = is_quantifier_free(elim) && infinite_ba_models(liff(f, elim));
    if (ok)
      ++qe_pass;
    else
      failures.push_back({{"case", i},
                          {"kind", "ba_qe"},
                          {"formula", render_formula(f)}});
  }

  int n_tight = opt.count / 10;
  for (int i = 0; i < n_tight; ++i) {
    FormulaPtr f = gen.ring_formula();
    std::vector<QECertificate> certs;
    TightDecomposition td = tighten(f, &certs);
    bool ok = is_tight_shape(td.sigma);
    for (const auto& c : certs) ok = ok && c.passed;
    ProductStructure P = field_product(gen.random_product(1, 3));
    auto asgs = assignments_for(P, free_variables(f), rng, 100, 50);
    for (const auto& asg : asgs)
      if (evaluate_tight(P, td, asg) != evaluate_product(P, f, asg, opt.bound))
        ok = false;
    if (ok)
      ++tighten_pass;
    else
      failures.push_back({{"case", i},
                          {"kind", "tighten"},
                          {"formula", render_formula(f)}});
  }

  bool all = decompose_pass == opt.count && qe_pass == n_bool &&
             tighten_pass == n_tight;
  std::printf("fuzz: decompose %d/%d, ba_qe %d/%d, tighten %d/%d -> %s\n",
              decompose_pass, opt.count, qe_pass, n_bool, tighten_pass, n_tight,
              all ? "PASS" : "FAIL");
  json r = report_skeleton("fuzz", opt);
  r["outputs"] = {{"decompose_pass", decompose_pass},
                  {"ba_qe_pass", qe_pass},
                  {"tighten_pass", tighten_pass},
                  {"count", opt.count}};
  r["certificates"] = failures;
  finish_report(r, opt, t0);
  return all ? 0 : kExitCertificate;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"formula transformation engine for products of finite structures"};
  app.require_subcommand(1);
  Options opt;
  std::string demo_name;

  auto add_common = [&](CLI::App* sub, bool needs_formula) {
    auto* f = sub->add_option("--formula", opt.formula, "input formula");
    if (needs_formula) f->required();
    sub->add_option("--products", opt.products, "e.g. F2xF3,F3xF5");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--N", opt.N, "small-field patch threshold");
    sub->add_option("--M", opt.M, "field verification margin");
    sub->add_option("--bound", opt.bound, "enumeration bound");
    sub->add_option("--json", opt.json_path, "write JSON report here");
    sub->add_flag("--timing", opt.timing, "include timing in the report");
  };

  auto* parse = app.add_subcommand("parse", "parse and round-trip a formula");
  add_common(parse, true);
  parse->add_option("--flavor", opt.flavor, "ring|boolean");
  auto* eval = app.add_subcommand("eval", "evaluate over products");
  add_common(eval, true);
  eval->add_option("--flavor", opt.flavor, "ring|boolean");
  auto* dec = app.add_subcommand("decompose", "acceptable-sequence decomposition");
  add_common(dec, true);
  auto* tig = app.add_subcommand("tighten", "tight decomposition over Atl");
  add_common(tig, true);
  auto* eae = app.add_subcommand("eae", "reduction to a combination of EAE formulas");
  add_common(eae, true);
  eae->add_option("--provider", opt.provider,
                  "table (verified per-field tables) or false (always-wrong "
                  "equivalences, for exercising the spot checks)");
  auto* itp = app.add_subcommand("interp", "single defining formula via idempotents");
  add_common(itp, true);
  auto* demo = app.add_subcommand("demo", "copyz | direct_sum | psi2_anomaly");
  demo->add_option("name", demo_name, "demo name")->required();
  add_common(demo, false);
  auto* fuzz = app.add_subcommand("fuzz", "seeded differential harness");
  add_common(fuzz, false);
  fuzz->add_option("--count", opt.count, "number of cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) return cmd_parse(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (dec->parsed()) return cmd_decompose(opt);
    if (tig->parsed()) return cmd_tighten(opt);
    if (eae->parsed()) return cmd_eae(opt);
    if (itp->parsed()) return cmd_interp(opt);
    if (demo->parsed()) {
      if (demo_name == "copyz") return demo_copyz(opt);
      if (demo_name == "direct_sum") return demo_direct_sum(opt);
      if (demo_name == "psi2_anomaly") return demo_psi2(opt);
      std::fprintf(stderr, "unknown demo: %s\n", demo_name.c_str());
      return 1;
    }
    if (fuzz->parsed()) return cmd_fuzz(opt);
  } catch (const SyntaxError& e) {
    std::fprintf(stderr, "parse error at position %zu: %s\n", e.position,
                 e.what());
    return kExitParse;
  } catch (const BoundExceeded& e) {
    std::fprintf(stderr, "resource bound exceeded: %s\n", e.what());
    return kExitBound;
  } catch (const ProviderError& e) {
    std::fprintf(stderr, "provider contract failure: %s\n", e.what());
    return kExitProvider;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
