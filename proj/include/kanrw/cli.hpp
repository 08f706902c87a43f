#ifndef KANRW_CLI_HPP
#define KANRW_CLI_HPP

// Command-line front end: JSON input parsing, subcommand dispatch and
// deterministic report emission for every pipeline in the library.
//
// Exit status contract: 0 success (including enumeration overflow, which is
// reported as data), 2 input parse error, 3 validation error, 4 completion
// budget exhausted (with partial output).

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kanrw/automata.hpp"
#include "kanrw/idrel.hpp"
#include "kanrw/kan.hpp"
#include "kanrw/machines.hpp"
#include "kanrw/ncpoly.hpp"
#include "kanrw/presentations.hpp"

namespace kanrw::cli {

using json = nlohmann::ordered_json;

struct CliError {
  int status;
  std::string message;
};

// ---------------------------------------------------------------------------
// Input parsing.

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot open input file: " + path};
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw CliError{2, "malformed JSON in " + path};
  return doc;
}

inline const json& need(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw CliError{2, "missing key: " + key};
  return doc.at(key);
}

inline std::vector<std::string> string_list(const json& j,
                                            const std::string& what) {
  if (!j.is_array()) throw CliError{2, what + " must be an array"};
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw CliError{2, what + " entries must be strings"};
    out.push_back(s.get<std::string>());
  }
  return out;
}

inline std::vector<Arrow> arrow_list(const json& j) {
  if (!j.is_array()) throw CliError{2, "arrows must be an array"};
  std::vector<Arrow> out;
  for (const auto& a : j) {
    if (a.is_array() && a.size() == 3) {
      out.push_back(Arrow{a[0].get<std::string>(), a[1].get<std::string>(),
                          a[2].get<std::string>()});
    } else if (a.is_object()) {
      out.push_back(Arrow{need(a, "label").get<std::string>(),
                          need(a, "src").get<std::string>(),
                          need(a, "tgt").get<std::string>()});
    } else {
      throw CliError{2, "arrow must be {label,src,tgt} or [label,src,tgt]"};
    }
  }
  return out;
}

// A relation is [[...lhs...],[...rhs...]] or {"lhs":..,"rhs":..,"at":..};
// identity sides are empty arrays and need "at" when both sides are empty.
inline PathRule parse_relation(const json& j, const GraphSpec& g) {
  Word lhs, rhs;
  std::string at;
  if (j.is_array() && j.size() == 2) {
    lhs = string_list(j[0], "relation lhs");
    rhs = string_list(j[1], "relation rhs");
  } else if (j.is_object()) {
    lhs = string_list(need(j, "lhs"), "relation lhs");
    rhs = string_list(need(j, "rhs"), "relation rhs");
    if (j.contains("at")) at = j.at("at").get<std::string>();
  } else {
    throw CliError{2, "relation must be a pair of arrow arrays"};
  }
  // parallel paths share their source, so an empty side may inherit it from
  // the other; "at" is only indispensable when both sides are identities
  auto source_of = [&](const Word& w, const Word& other) -> std::string {
    if (!w.empty()) return g.arrow(w.front()).src;
    if (!other.empty()) return g.arrow(other.front()).src;
    if (!at.empty()) return at;
    throw CliError{2, "identity relation requires an \"at\" object"};
  };
  return PathRule{PathWord{source_of(lhs, rhs), lhs},
                  PathWord{source_of(rhs, lhs), rhs}};
}

inline CategoryPresentation parse_category(const json& doc) {
  CategoryPresentation pres;
  if (doc.contains("generators")) {
    // monoid shorthand: one object "m", one loop per generator
    pres.graph.objects = {"m"};
    for (const auto& x : string_list(doc.at("generators"), "generators"))
      pres.graph.arrows.push_back(Arrow{x, "m", "m"});
  } else {
    pres.graph.objects = string_list(need(doc, "objects"), "objects");
    pres.graph.arrows = arrow_list(need(doc, "arrows"));
  }
  if (doc.contains("relations"))
    for (const auto& r : doc.at("relations"))
      pres.relations.push_back(parse_relation(r, pres.graph));
  return pres;
}

inline KanPresentation parse_kan(const json& doc) {
  KanPresentation pres;
  pres.obA = string_list(need(doc, "objects_A"), "objects_A");
  pres.arrA = arrow_list(need(doc, "arrows_A"));
  pres.delta.objects = string_list(need(doc, "objects_B"), "objects_B");
  pres.delta.arrows = arrow_list(need(doc, "arrows_B"));
  if (doc.contains("relations_B"))
    for (const auto& r : doc.at("relations_B"))
      pres.relB.push_back(parse_relation(r, pres.delta));
  for (const auto& [a, b] : need(doc, "F_objects").items())
    pres.fOb[a] = b.get<std::string>();
  for (const auto& [a, w] : need(doc, "F_arrows").items()) {
    Word arrows = string_list(w, "F_arrows." + a);
    std::string src = pres.fOb.at(pres.gamma().arrow(a).src);
    pres.fArr[a] = PathWord{src, arrows};
  }
  for (const auto& [ob, xs] : need(doc, "X_objects").items())
    pres.xOb[ob] = string_list(xs, "X_objects." + ob);
  for (const auto& [a, row] : need(doc, "X_arrows").items())
    pres.xArr[a] = string_list(row, "X_arrows." + a);
  return pres;
}

// ---------------------------------------------------------------------------
// Printing helpers.

inline std::string word_str(const Word& w) {
  if (w.empty()) return "id";
  std::string out;
  for (const auto& x : w) {
    if (!out.empty()) out += " ";
    out += x;
  }
  return out;
}

inline std::string term_str(const TaggedTerm& t) {
  std::string out = t.tag + "|";
  out += word_str(t.path.arrows);
  return out;
}

inline std::vector<PathRule> sorted_rules(std::vector<PathRule> rules,
                                          const GraphSpec& g) {
  std::sort(rules.begin(), rules.end(),
            [&](const PathRule& a, const PathRule& b) {
              return lenlex_compare_words(a.lhs.arrows, b.lhs.arrows, g) ==
                     Ordering::less;
            });
  return rules;
}

inline MixedRewriteSystem sorted_mixed(MixedRewriteSystem R,
                                       const KanPresentation& pres) {
  std::sort(R.t_rules.begin(), R.t_rules.end(),
            [&](const TRule& a, const TRule& b) {
              int ta = pres.tag_index(a.lhs.tag);
              int tb = pres.tag_index(b.lhs.tag);
              if (ta != tb) return ta < tb;
              return lenlex_compare_words(a.lhs.path.arrows, b.lhs.path.arrows,
                                          pres.delta) == Ordering::less;
            });
  R.p_rules = sorted_rules(std::move(R.p_rules), pres.delta);
  return R;
}

inline json rules_json(const std::vector<PathRule>& rules) {
  json out = json::array();
  for (const auto& r : rules)
    out.push_back({{"at", r.lhs.source}, {"lhs", r.lhs.arrows},
                   {"rhs", r.rhs.arrows}});
  return out;
}

inline json mixed_json(const MixedRewriteSystem& R) {
  json t = json::array();
  for (const auto& r : R.t_rules)
    t.push_back({{"lhs", {{"tag", r.lhs.tag}, {"path", r.lhs.path.arrows}}},
                 {"rhs", {{"tag", r.rhs.tag}, {"path", r.rhs.path.arrows}}}});
  return {{"t_rules", t}, {"p_rules", rules_json(R.p_rules)}};
}

// ---------------------------------------------------------------------------
// Report: a JSON document plus a line renderer for the text format.

struct Report {
  json doc = json::object();
  std::vector<std::string> lines;

  void line(const std::string& s) { lines.push_back(s); }
  void emit(std::ostream& out, bool as_json) const {
    if (as_json) {
      out << doc.dump(2) << "\n";
    } else {
      for (const auto& s : lines) out << s << "\n";
    }
  }
};

inline void report_rules(Report& rep, const std::vector<PathRule>& rules) {
  rep.doc["rules"] = rules_json(rules);
  rep.line("rules: " + std::to_string(rules.size()));
  for (const auto& r : rules)
    rep.line("  " + word_str(r.lhs.arrows) + " -> " + word_str(r.rhs.arrows) +
             "  (at " + r.lhs.source + ")");
}

inline void report_mixed(Report& rep, const MixedRewriteSystem& R) {
  rep.doc["rules"] = mixed_json(R);
  rep.line("rules: " + std::to_string(R.t_rules.size() + R.p_rules.size()) +
           " (" + std::to_string(R.t_rules.size()) + " term, " +
           std::to_string(R.p_rules.size()) + " path)");
  for (const auto& r : R.t_rules)
    rep.line("  " + term_str(r.lhs) + " -> " + term_str(r.rhs));
  for (const auto& r : R.p_rules)
    rep.line("  " + word_str(r.lhs.arrows) + " -> " + word_str(r.rhs.arrows) +
             "  (at " + r.lhs.source + ")");
}

inline void report_census(Report& rep, const KanResult& census,
                          const KanPresentation& pres) {
  json by_ob = json::object();
  for (const auto& B : pres.delta.objects) {
    auto it = census.by_object.find(B);
    if (it == census.by_object.end()) continue;
    json cell = json::array();
    for (const auto& t : it->second) cell.push_back(term_str(t));
    by_ob[B] = cell;
  }
  rep.doc["census"] = by_ob;
  rep.doc["total"] = census.total;
  rep.doc["overflow"] = census.overflow;
  rep.line("elements: " + std::to_string(census.total) +
           (census.overflow ? " (enumeration limit exceeded)" : ""));
  for (const auto& B : pres.delta.objects) {
    auto it = census.by_object.find(B);
    if (it == census.by_object.end()) continue;
    std::string row = "  " + B + ":";
    for (const auto& t : it->second) row += " " + term_str(t);
    rep.line(row);
  }
}

// ---------------------------------------------------------------------------
// Shared option state.

struct RunConfig {
  std::string input;
  std::string format = "text";
  std::size_t limit = 1000;
  int max_rules = 10000;
  int max_passes = 100;
  std::string object;        // kan regex
  std::string tag = "H";     // coset
  bool dot = false;          // machine dumps in DOT format
  bool eliminate_inverses = false;  // idrel positive encoding

  CompletionBudget budget() const {
    if (limit == 0 || max_rules <= 0 || max_passes <= 0)
      throw CliError{3, "limit and budgets must be positive"};
    return CompletionBudget{max_rules, max_passes};
  }
  bool as_json() const { return format == "json"; }
};

// ---------------------------------------------------------------------------
// Subcommand handlers.  Each returns the exit status and fills the report.

inline int handle_kb_complete(const RunConfig& cfg, Report& rep) {
  auto pres = parse_category(load_json(cfg.input));
  auto comp = complete_presentation(pres, cfg.budget());
  rep.doc["complete"] = comp.complete;
  rep.line(comp.complete ? "complete" : "incomplete (budget exhausted)");
  report_rules(rep, sorted_rules(comp.rules, pres.graph));
  return comp.complete ? 0 : 4;
}

inline int handle_kan(const RunConfig& cfg, Report& rep,
                      const std::string& mode) {
  auto pres = parse_kan(load_json(cfg.input));
  validate_presentation(pres);
  auto comp = complete_kan(initial_rules(pres), pres, cfg.budget());
  rep.doc["complete"] = comp.complete;
  rep.line(comp.complete ? "complete" : "incomplete (budget exhausted)");
  report_mixed(rep, sorted_mixed(comp.rules, pres));
  if (!comp.complete) return 4;
  if (mode == "enumerate") {
    auto census = enumerate_kan(comp.rules, pres, cfg.limit);
    report_census(rep, census, pres);
    json eps = json::object();
    for (const auto& [x, t] : census.epsilon) eps[x] = term_str(t);
    rep.doc["epsilon"] = eps;
    for (const auto& [x, t] : census.epsilon)
      rep.line("  eps " + x + " -> " + term_str(t));
  } else if (mode == "regex") {
    if (!pres.delta.has_object(cfg.object))
      throw CliError{3, "unknown object: " + cfg.object};
    Dfa dfa = build_irreducibles_dfa(pres, comp.rules);
    std::string rx = regex_to_string(regex_for_object(dfa, pres, cfg.object));
    rep.doc["object"] = cfg.object;
    rep.doc["regex"] = rx;
    rep.line("regex(" + cfg.object + ") = " + rx);
  }
  return 0;
}

// Shared tail for the special-case Kan builders: complete, enumerate, report
// the representatives.
inline int finish_kan_case(const RunConfig& cfg, Report& rep,
                           const KanPresentation& pres,
                           const std::string& noun) {
  auto comp = complete_kan(initial_rules(pres), pres, cfg.budget());
  rep.doc["complete"] = comp.complete;
  rep.line(comp.complete ? "complete" : "incomplete (budget exhausted)");
  report_mixed(rep, sorted_mixed(comp.rules, pres));
  if (!comp.complete) return 4;
  auto census = enumerate_kan(comp.rules, pres, cfg.limit);
  report_census(rep, census, pres);
  json reps = json::array();
  std::string row = noun + ":";
  for (const auto& B : pres.delta.objects) {
    auto it = census.by_object.find(B);
    if (it == census.by_object.end()) continue;
    for (const auto& t : it->second) {
      reps.push_back(term_str(t));
      row += " " + term_str(t);
    }
  }
  rep.doc[noun] = reps;
  rep.line(row);
  return 0;
}

inline int handle_coset(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  auto group = parse_category(doc);
  std::vector<Word> sub;
  for (const auto& w : need(doc, "subgroup"))
    sub.push_back(string_list(w, "subgroup word"));
  auto pres = build_coset_case(group, sub, cfg.tag);
  return finish_kan_case(cfg, rep, pres, "cosets");
}

inline int handle_orbit(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  auto gens = string_list(need(doc, "generators"), "generators");
  auto omega = string_list(need(doc, "omega"), "omega");
  std::map<std::string, std::map<std::string, std::string>> action;
  for (const auto& [g, row] : need(doc, "action").items())
    for (const auto& [p, q] : row.items())
      action[g][p] = q.get<std::string>();
  auto pres = build_orbit_case(gens, omega, action);
  return finish_kan_case(cfg, rep, pres, "orbits");
}

inline int handle_conjugacy(const RunConfig& cfg, Report& rep) {
  auto group = parse_category(load_json(cfg.input));
  auto pres = build_conjugacy_case(group, cfg.budget(), cfg.limit);
  return finish_kan_case(cfg, rep, pres, "classes");
}

inline int handle_colimit(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  GraphSpec shape;
  shape.objects = string_list(need(doc, "objects"), "objects");
  if (doc.contains("arrows")) shape.arrows = arrow_list(doc.at("arrows"));
  std::map<std::string, std::vector<std::string>> sets;
  for (const auto& [ob, xs] : need(doc, "sets").items())
    sets[ob] = string_list(xs, "sets." + ob);
  std::map<std::string, std::map<std::string, std::string>> maps;
  if (doc.contains("maps"))
    for (const auto& [a, row] : doc.at("maps").items())
      for (const auto& [p, q] : row.items())
        maps[a][p] = q.get<std::string>();
  auto pres = build_colimit_case(shape, sets, maps);
  return finish_kan_case(cfg, rep, pres, "colimit");
}

inline int handle_moore(const RunConfig& cfg, Report& rep) {
  auto pres = parse_kan(load_json(cfg.input));
  validate_presentation(pres);
  auto comp = complete_kan(initial_rules(pres), pres, cfg.budget());
  if (!comp.complete) {
    rep.doc["complete"] = false;
    rep.line("incomplete (budget exhausted)");
    report_mixed(rep, sorted_mixed(comp.rules, pres));
    return 4;
  }
  auto census = enumerate_kan(comp.rules, pres, cfg.limit);
  if (census.overflow) {
    rep.doc["overflow"] = true;
    rep.line("enumeration limit exceeded: no finite reduction machine");
    return 0;
  }
  MooreMachine m = build_moore(pres, comp.rules, cfg.limit);
  if (cfg.dot) {
    rep.line("digraph moore {");
    for (std::size_t s = 0; s < m.state_count(); ++s) {
      auto lam = m.lambda(static_cast<int>(s));
      std::string label = s == 0 ? "s0" : s == 1 ? "d" : term_str(*lam);
      rep.line("  q" + std::to_string(s) + " [label=\"" + label + "\"];");
    }
    for (const auto& [key, to] : m.delta)
      if (to != m.d || key.first == m.d)
        rep.line("  q" + std::to_string(key.first) + " -> q" +
                 std::to_string(to) + " [label=\"" +
                 m.alphabet[static_cast<std::size_t>(key.second)] + "\"];");
    rep.line("}");
    return 0;
  }
  rep.doc["states"] = m.state_count();
  rep.doc["alphabet"] = m.alphabet;
  json outputs = json::array();
  for (const auto& t : m.outputs) outputs.push_back(term_str(t));
  rep.doc["outputs"] = outputs;
  json delta = json::array();
  rep.line("states: " + std::to_string(m.state_count()));
  rep.line("alphabet: " + word_str(m.alphabet));
  for (const auto& [key, to] : m.delta) {
    delta.push_back({key.first, m.alphabet[static_cast<std::size_t>(
                                    key.second)], to});
    rep.line("  q" + std::to_string(key.first) + " --" +
             m.alphabet[static_cast<std::size_t>(key.second)] + "--> q" +
             std::to_string(to));
  }
  rep.doc["delta"] = delta;
  return 0;
}

inline int handle_cayley(const RunConfig& cfg, Report& rep) {
  auto pres = parse_category(load_json(cfg.input));
  auto comp = complete_presentation(pres, cfg.budget());
  if (!comp.complete) {
    rep.doc["complete"] = false;
    rep.line("incomplete (budget exhausted)");
    report_rules(rep, sorted_rules(comp.rules, pres.graph));
    return 4;
  }
  auto census = enumerate_elements(comp.rules, pres.graph, cfg.limit);
  if (census.overflow) {
    rep.doc["overflow"] = true;
    rep.line("enumeration limit exceeded: no finite Cayley machine");
    return 0;
  }
  CayleyGraph g = build_cayley(pres, comp.rules, cfg.limit);
  if (cfg.dot) {
    rep.line("digraph cayley {");
    for (std::size_t i = 0; i < g.labels.size(); ++i)
      rep.line("  v" + std::to_string(i) + " [label=\"" +
               word_str(g.labels[i]) + "\"];");
    for (const auto& e : g.edges)
      rep.line("  v" + std::to_string(e.src) + " -> v" +
               std::to_string(e.tgt) + " [label=\"" + e.generator + "\"" +
               (e.in_tree ? ", style=bold" : "") + "];");
    rep.line("}");
    return 0;
  }
  json labels = json::array();
  for (const auto& l : g.labels) labels.push_back(word_str(l));
  rep.doc["vertices"] = labels;
  json edges = json::array();
  rep.line("vertices: " + std::to_string(g.labels.size()));
  for (std::size_t i = 0; i < g.labels.size(); ++i)
    rep.line("  v" + std::to_string(i) + " = " + word_str(g.labels[i]));
  for (const auto& e : g.edges) {
    edges.push_back({{"src", e.src}, {"gen", e.generator}, {"tgt", e.tgt},
                     {"tree", e.in_tree}});
    rep.line("  v" + std::to_string(e.src) + " --" + e.generator + "--> v" +
             std::to_string(e.tgt) + (e.in_tree ? "  [tree]" : ""));
  }
  rep.doc["edges"] = edges;
  json orders = json::object();
  for (const auto& [x, k] : g.generator_order) {
    orders[x] = k;
    rep.line("  order(" + x + ") = " + std::to_string(k));
  }
  rep.doc["generator_order"] = orders;
  return 0;
}

inline NcPoly parse_poly_or_fail(const std::string& text,
                                 const std::vector<std::string>& gens) {
  try {
    return parse_nc_poly(text, gens);
  } catch (const std::invalid_argument& e) {
    throw CliError{2, std::string("polynomial parse error: ") + e.what()};
  }
}

inline int handle_ncgb(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  auto gens = string_list(need(doc, "generators"), "generators");
  std::vector<NcPoly> input;
  for (const auto& s : need(doc, "polynomials")) {
    if (!s.is_string()) throw CliError{2, "polynomials must be strings"};
    input.push_back(parse_poly_or_fail(s.get<std::string>(), gens));
  }
  auto res = buchberger(input, gens, cfg.budget());
  std::sort(res.basis.polys.begin(), res.basis.polys.end(),
            [&](const NcPoly& p, const NcPoly& q) {
              return monomial_less(lead_term(p).monomial,
                                   lead_term(q).monomial, gens);
            });
  rep.doc["complete"] = res.complete;
  rep.line(res.complete ? "complete" : "incomplete (budget exhausted)");
  json basis = json::array();
  rep.line("basis: " + std::to_string(res.basis.polys.size()));
  for (const auto& p : res.basis.polys) {
    basis.push_back(nc_poly_to_string(p));
    rep.line("  " + nc_poly_to_string(p));
  }
  rep.doc["basis"] = basis;
  if (!res.complete) return 4;
  auto dim = algebra_dimension(res.basis, cfg.limit);
  if (dim.infinite) {
    rep.doc["dimension"] = "infinite";
    rep.doc["irreducible_language"] = regex_to_string(dim.language);
    rep.line("dimension: infinite");
    rep.line("irreducible monomials: " + regex_to_string(dim.language));
  } else {
    rep.doc["dimension"] = dim.dimension;
    json mons = json::array();
    std::string row = "monomials:";
    for (const auto& m : dim.monomials) {
      mons.push_back(word_str(m));
      row += " " + word_str(m);
    }
    rep.doc["monomials"] = mons;
    rep.line("dimension: " + std::to_string(dim.dimension));
    rep.line(row);
  }
  return 0;
}

inline int handle_ncreduce(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  auto gens = string_list(need(doc, "generators"), "generators");
  std::vector<NcPoly> basis;
  for (const auto& s : need(doc, "basis"))
    basis.push_back(parse_poly_or_fail(s.get<std::string>(), gens));
  NcPoly p = parse_poly_or_fail(need(doc, "input").get<std::string>(), gens);
  ReduceTrace trace;
  NcPoly nf = reduce_poly(p, basis, gens, &trace);
  rep.doc["input"] = nc_poly_to_string(p);
  rep.doc["normal_form"] = nc_poly_to_string(nf);
  rep.doc["steps"] = trace.size();
  rep.line("input:       " + nc_poly_to_string(p));
  rep.line("normal form: " + nc_poly_to_string(nf));
  rep.line("steps: " + std::to_string(trace.size()));
  json steps = json::array();
  for (const auto& s : trace) {
    steps.push_back({{"coeff", s.coeff.str()}, {"left", word_str(s.left)},
                     {"basis", s.basis_index}, {"right", word_str(s.right)}});
    rep.line("  - " + s.coeff.str() + " * (" + word_str(s.left) + ") f" +
             std::to_string(s.basis_index) + " (" + word_str(s.right) + ")");
  }
  rep.doc["trace"] = steps;
  return 0;
}

inline int handle_idrel(const RunConfig& cfg, Report& rep) {
  json doc = load_json(cfg.input);
  auto gens = string_list(need(doc, "generators"), "generators");
  std::map<std::string, int> orders;
  if (doc.contains("orders"))
    for (const auto& [x, k] : doc.at("orders").items())
      orders[x] = k.get<int>();
  std::vector<std::string> labels;
  std::vector<Word> relators;
  for (const auto& r : need(doc, "relators")) {
    labels.push_back(need(r, "label").get<std::string>());
    Word raw = string_list(need(r, "word"), "relator word");
    bool has_inverse = false;
    FreeWord fw;
    for (const auto& tok : raw) {
      if (tok.size() > 1 && tok.back() == '-') {
        fw.push_back({tok.substr(0, tok.size() - 1), -1});
        has_inverse = true;
      } else {
        fw.push_back({tok, 1});
      }
    }
    if (has_inverse && !cfg.eliminate_inverses)
      throw CliError{3,
                     "inverse letters require --eliminate-inverses and "
                     "generator orders"};
    relators.push_back(has_inverse ? encode_positive(fw, orders) : raw);
  }
  auto pres = make_group_ir(gens, labels, relators);

  Kb2Result kbres = kb2(initial_eirs(pres), pres, cfg.budget());
  json K = json::array();
  std::vector<EirsRule> rules = kbres.eirs;
  GraphSpec mgraph = pres.monoid().graph;
  std::sort(rules.begin(), rules.end(),
            [&](const EirsRule& a, const EirsRule& b) {
              return lenlex_compare_words(a.lhs, b.lhs, mgraph) ==
                     Ordering::less;
            });
  for (const auto& r : rules)
    K.push_back({{"lhs", word_str(r.lhs)}, {"rhs", word_str(r.rhs)}});
  rep.doc["free"] = gens;
  json rels = json::object();
  for (std::size_t i = 0; i < labels.size(); ++i)
    rels[labels[i]] = word_str(relators[i]);
  rep.doc["rels"] = rels;
  rep.doc["K"] = K;
  rep.line("free: " + word_str(gens));
  for (std::size_t i = 0; i < labels.size(); ++i)
    rep.line("  " + labels[i] + " = " + word_str(relators[i]));
  rep.line(kbres.complete ? "K: complete, " + std::to_string(rules.size()) +
                                " rules"
                          : "K: incomplete (budget exhausted)");
  for (const auto& r : rules)
    rep.line("  " + word_str(r.lhs) + " -> " + word_str(r.rhs));
  if (!kbres.complete) {
    rep.doc["complete"] = false;
    return 4;
  }

  IdrelContext ctx = build_idrel_context(pres, cfg.budget(), cfg.limit);
  json elF = json::array();
  std::string row = "elF:";
  for (const auto& g : ctx.graph.labels) {
    elF.push_back(word_str(g));
    row += " " + word_str(g);
  }
  rep.doc["elF"] = elF;
  rep.line(row);

  auto records = generate_identities(pres, cfg.budget(), cfg.limit);
  bool is_ids = true;
  json idents = json::array();
  rep.line("idents: " + std::to_string(records.size()));
  for (const auto& rec : records) {
    json seq = json::array();
    std::string text;
    for (const auto& term : rec.sequence) {
      seq.push_back(json::array({term.relator +
                                     (term.sign > 0 ? "+" : "-"),
                                 fg_to_string(term.conj)}));
      if (!text.empty()) text += " ";
      text += "(" + term.relator + (term.sign > 0 ? "+" : "-") + ", " +
              fg_to_string(term.conj) + ")";
    }
    idents.push_back(seq);
    rep.line("  " + text);
    if (!free_reduce(boundary(rec.sequence, pres)).empty()) is_ids = false;
  }
  rep.doc["idents"] = idents;
  rep.doc["isIdsRecord"] = is_ids;
  rep.line(std::string("isIdsRecord: ") + (is_ids ? "true" : "false"));
  return 0;
}

// ---------------------------------------------------------------------------
// Dispatch.

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("KANRW_LIMIT"))
    cfg.limit = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));

  CLI::App app{"kanrw: rewriting toolkit for Kan extensions, reduction "
               "machines, noncommutative Groebner bases and identities "
               "among relations"};
  app.require_subcommand(1);

  std::string mode;  // leaf handler name
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "input JSON file")->required();
    sub->add_option("--format", cfg.format, "output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--limit", cfg.limit,
                    "enumeration limit (default 1000; KANRW_LIMIT overrides)")
        ->capture_default_str();
    sub->add_option("--max-rules", cfg.max_rules, "completion rule budget")
        ->capture_default_str();
    sub->add_option("--max-passes", cfg.max_passes, "completion pass budget")
        ->capture_default_str();
    sub->callback([&, sub] { mode = sub->get_name(); });
    return sub;
  };

  auto* kan = app.add_subcommand("kan", "Kan extension pipelines");
  kan->require_subcommand(1);
  auto* kan_complete =
      add_common(kan->add_subcommand("complete", "complete the mixed system"));
  auto* kan_enumerate = add_common(
      kan->add_subcommand("enumerate", "complete and enumerate the extension"));
  auto* kan_regex = add_common(kan->add_subcommand(
      "regex", "regular expression for the irreducible terms at an object"));
  kan_regex->add_option("--object", cfg.object, "target object of Delta")
      ->required();

  auto* kb = app.add_subcommand("kb", "Knuth-Bendix completion");
  kb->require_subcommand(1);
  auto* kb_complete =
      add_common(kb->add_subcommand("complete", "complete a presentation"));

  auto* coset = add_common(
      app.add_subcommand("coset", "coset system for a subgroup"));
  coset->add_option("--tag", cfg.tag, "subgroup tag symbol")
      ->capture_default_str();
  auto* orbit =
      add_common(app.add_subcommand("orbit", "orbits of a monoid action"));
  auto* conjugacy = add_common(
      app.add_subcommand("conjugacy", "conjugacy classes of a finite group"));
  auto* colimit =
      add_common(app.add_subcommand("colimit", "colimit of a diagram of sets"));

  auto* moore = add_common(
      app.add_subcommand("moore", "Moore reduction machine of an extension"));
  moore->add_flag("--dot", cfg.dot, "emit DOT instead of a table");
  auto* cayley = add_common(
      app.add_subcommand("cayley", "Cayley machine of a finite group"));
  cayley->add_flag("--dot", cfg.dot, "emit DOT instead of a table");

  auto* ncgb = add_common(
      app.add_subcommand("ncgb", "noncommutative Groebner basis"));
  auto* ncreduce = add_common(
      app.add_subcommand("ncreduce", "reduce a polynomial modulo a basis"));

  auto* idrel = add_common(app.add_subcommand(
      "idrel", "identities among the relators of a group presentation"));
  idrel->add_flag("--eliminate-inverses", cfg.eliminate_inverses,
                  "rewrite x^-1 as x^(order-1) using declared orders");
  (void)kan_complete;
  (void)kan_enumerate;
  (void)kb_complete;
  (void)orbit;
  (void)conjugacy;
  (void)colimit;
  (void)ncgb;
  (void)ncreduce;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Report rep;
  int status = 0;
  try {
    if (kan_regex->parsed()) {
      status = handle_kan(cfg, rep, "regex");
    } else if (kan->parsed()) {
      status = handle_kan(cfg, rep, mode);
    } else if (kb->parsed()) {
      status = handle_kb_complete(cfg, rep);
    } else if (mode == "coset") {
      status = handle_coset(cfg, rep);
    } else if (mode == "orbit") {
      status = handle_orbit(cfg, rep);
    } else if (mode == "conjugacy") {
      status = handle_conjugacy(cfg, rep);
    } else if (mode == "colimit") {
      status = handle_colimit(cfg, rep);
    } else if (mode == "moore") {
      status = handle_moore(cfg, rep);
    } else if (mode == "cayley") {
      status = handle_cayley(cfg, rep);
    } else if (mode == "ncgb") {
      status = handle_ncgb(cfg, rep);
    } else if (mode == "ncreduce") {
      status = handle_ncreduce(cfg, rep);
    } else if (mode == "idrel") {
      status = handle_idrel(cfg, rep);
    } else {
      err << "unknown subcommand\n";
      return 2;
    }
  } catch (const CliError& e) {
    err << "error: " << e.message << "\n";
    return e.status;
  } catch (const json::exception& e) {
    err << "error: invalid input document: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  rep.doc["status"] = status;
  rep.emit(out, cfg.as_json());
  return status;
}

}  // namespace kanrw::cli

#endif  // KANRW_CLI_HPP
