#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "golden_kan.hpp"
#include "kanrw/automata.hpp"

using namespace kanrw;
using golden::W;

namespace {

// Is w a well-typed tagged term (tag followed by a composable path)?  If so
// and `target` is non-null, the path target is stored there.
bool is_valid_term_word(const Word& w, const KanPresentation& pres,
                        std::string* target = nullptr) {
  if (w.empty()) return false;
  auto elems = pres.elements();
  if (std::find(elems.begin(), elems.end(), w.front()) == elems.end())
    return false;
  std::string at = pres.f_object(pres.element_object(w.front()));
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (pres.delta.arrow_index(w[i]) < 0) return false;
    const Arrow& b = pres.delta.arrow(w[i]);
    if (b.src != at) return false;
    at = b.tgt;
  }
  if (target) *target = at;
  return true;
}

bool oracle_reducible_or_ill_typed(const Word& w, const KanPresentation& pres,
                                   const MixedRewriteSystem& R) {
  if (!is_valid_term_word(w, pres)) return true;
  TaggedTerm t{w.front(),
               PathWord{pres.f_object(pres.element_object(w.front())),
                        Word(w.begin() + 1, w.end())}};
  return !is_irreducible_term(t, R);
}

// All words of length <= maxlen accepted by the NFA, via an incremental
// subset walk with dead-branch pruning.
void collect_accepted(const Nfa& nfa, std::size_t maxlen, Word& prefix,
                      const std::set<int>& cur, std::vector<Word>& out) {
  for (int s : cur)
    if (nfa.terminal.count(s)) {
      out.push_back(prefix);
      break;
    }
  if (prefix.size() == maxlen) return;
  for (std::size_t li = 0; li < nfa.alphabet.size(); ++li) {
    std::set<int> next;
    for (int s : cur) {
      auto it = nfa.transition.find({s, static_cast<int>(li)});
      if (it != nfa.transition.end())
        next.insert(it->second.begin(), it->second.end());
    }
    if (next.empty()) continue;
    prefix.push_back(nfa.alphabet[li]);
    collect_accepted(nfa, maxlen, prefix, next, out);
    prefix.pop_back();
  }
}

std::vector<Word> accepted_words(const Nfa& nfa, std::size_t maxlen) {
  std::vector<Word> out;
  Word prefix;
  collect_accepted(nfa, maxlen, prefix, nfa.initial, out);
  std::sort(out.begin(), out.end());
  return out;
}

RegexPtr rx_word(const std::string& spaced) {
  std::vector<RegexPtr> parts;
  for (const auto& s : W(spaced)) parts.push_back(rx_letter(s));
  return rx_cat(parts);
}

// (x1+x2+x3)(b5 b3 (b4+b5 b3)* + id) etc., built structurally.
RegexPtr closed_kb1() {
  RegexPtr xs = rx_alt({rx_letter("x1"), rx_letter("x2"), rx_letter("x3")});
  RegexPtr loop = rx_star(rx_alt({rx_letter("b4"), rx_word("b5 b3")}));
  return rx_cat({xs, rx_alt({rx_cat({rx_word("b5 b3"), loop}), rx_id()})});
}
RegexPtr closed_kb2() {
  RegexPtr xs = rx_alt({rx_letter("x1"), rx_letter("x2"), rx_letter("x3")});
  RegexPtr loop = rx_star(rx_alt({rx_letter("b4"), rx_word("b5 b3")}));
  RegexPtr ys = rx_alt({rx_letter("y1"), rx_letter("y2")});
  return rx_alt(
      {rx_cat({xs, rx_word("b5 b3"), loop, rx_letter("b1")}), ys});
}
RegexPtr closed_kb3() {
  RegexPtr xs = rx_alt({rx_letter("x1"), rx_letter("x2"), rx_letter("x3")});
  RegexPtr loop = rx_star(rx_alt({rx_letter("b4"), rx_word("b5 b3")}));
  RegexPtr ys = rx_alt({rx_letter("y1"), rx_letter("y2")});
  RegexPtr tail = rx_alt({rx_word("b1 b2"), rx_letter("b5")});
  return rx_alt({rx_cat({xs, rx_alt({rx_cat({rx_word("b5 b3"), loop, tail}),
                                     rx_letter("b5")})}),
                 rx_cat({ys, rx_letter("b2")})});
}
// The alternative closed forms of the same three languages.
RegexPtr closed_kb1_alt() {
  RegexPtr xs = rx_alt({rx_letter("x1"), rx_letter("x2"), rx_letter("x3")});
  RegexPtr core = rx_cat(
      {rx_letter("b5"),
       rx_star(rx_cat({rx_letter("b3"), rx_star(rx_letter("b4")),
                       rx_letter("b5")})),
       rx_letter("b3"), rx_star(rx_letter("b4"))});
  return rx_cat({xs, rx_alt({core, rx_id()})});
}

}  // namespace

TEST_CASE("regex construction, printing and membership") {
  RegexPtr r = rx_alt({rx_star(rx_letter("a")), rx_letter("c"),
                       rx_cat({rx_letter("a"), rx_letter("c")})});
  CHECK(regex_to_string(r) == "a*+c+a c");
  CHECK(regex_membership(r, W("a a a a")));
  CHECK(regex_membership(r, W("")));
  CHECK(regex_membership(r, W("a c")));
  CHECK_FALSE(regex_membership(r, W("c a")));
  CHECK_FALSE(regex_membership(rx_empty(), W("")));
  CHECK(regex_membership(rx_id(), W("")));
  CHECK_FALSE(regex_membership(rx_id(), W("a")));
  // conservative simplification
  CHECK(rx_cat({rx_letter("a"), rx_empty()})->kind == Regex::Kind::empty);
  CHECK(rx_alt({rx_empty(), rx_letter("a"), rx_letter("a")})->kind ==
        Regex::Kind::letter);
  CHECK(rx_star(rx_id())->kind == Regex::Kind::id);
}

TEST_CASE("reducibility acceptor: the 14-row transition table") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Nfa nfa = build_reducibility_nfa(pres, R);

  std::vector<std::string> expected_states = {
      "s0", "B1", "B2", "B3", "x1", "x2", "x3", "y1", "y2",
      "y1|b2", "y2|b2", "b1", "b1 b2", "D"};
  std::vector<std::string> got = nfa.states;
  std::sort(got.begin(), got.end());
  std::sort(expected_states.begin(), expected_states.end());
  CHECK(got == expected_states);

  CHECK(nfa.alphabet == std::vector<std::string>{"x1", "x2", "x3", "y1", "y2",
                                                 "b1", "b2", "b3", "b4",
                                                 "b5"});
  // expected rows; every unlisted (state, letter) goes to {D}
  std::map<std::pair<std::string, std::string>, std::set<std::string>> rows;
  for (const auto& x : {"x1", "x2", "x3", "y1", "y2"})
    rows[{"s0", x}] = {x};
  for (const auto& x : {"x1", "x2", "x3"}) rows[{x, "b5"}] = {"B3"};
  rows[{"y1", "b2"}] = {"y1|b2", "B3"};
  rows[{"y2", "b2"}] = {"y2|b2", "B3"};
  rows[{"B1", "b1"}] = {"b1", "B2"};
  rows[{"B1", "b4"}] = {"B1"};
  rows[{"B1", "b5"}] = {"B3"};
  rows[{"B2", "b2"}] = {"B3"};
  rows[{"B3", "b3"}] = {"B1"};
  rows[{"b1", "b2"}] = {"b1 b2", "B3"};

  for (const auto& state : nfa.states)
    for (const auto& letter : nfa.alphabet) {
      std::set<std::string> want = {"D"};
      auto it = rows.find({state, letter});
      if (it != rows.end()) want = it->second;
      const auto& succ =
          nfa.transition.at({nfa.state_index(state),
                             nfa.letter_index(letter)});
      std::set<std::string> got_labels;
      for (int s : succ)
        got_labels.insert(nfa.states[static_cast<std::size_t>(s)]);
      INFO("state " << state << ", letter " << letter);
      CHECK(got_labels == want);
    }

  CHECK(nfa.initial == std::set<int>{nfa.state_index("s0")});
  CHECK(nfa.terminal == std::set<int>{nfa.state_index("s0"),
                                      nfa.state_index("D")});
}

TEST_CASE("reducibility acceptor with no rules accepts exactly non-terms") {
  auto pres = golden::kan_main_example();
  MixedRewriteSystem empty;
  Nfa nfa = build_reducibility_nfa(pres, empty);
  for (const auto& w : words_upto(nfa.alphabet, 3))
    CHECK(nfa_accepts(nfa, w) == !is_valid_term_word(w, pres));
}

TEST_CASE("reducibility acceptor agrees with the direct oracle") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Nfa nfa = build_reducibility_nfa(pres, R);
  for (const auto& w : words_upto(nfa.alphabet, 4))
    CHECK(nfa_accepts(nfa, w) == oracle_reducible_or_ill_typed(w, pres, R));
}

TEST_CASE("determinize preserves the language") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Nfa nfa = build_reducibility_nfa(pres, R);
  Dfa dfa = determinize(nfa);
  CHECK(nfa_language_agree_upto(nfa, dfa_to_nfa(dfa), 8));
  // determinizing a deterministic machine preserves the language too
  Dfa again = determinize(dfa_to_nfa(dfa));
  CHECK(nfa_language_agree_upto(dfa_to_nfa(dfa), dfa_to_nfa(again), 8));
}

TEST_CASE("complete, complement, glue") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Dfa det = determinize(build_reducibility_nfa(pres, R));
  Dfa full = complete_dfa(det);
  CHECK(full.is_complete());
  CHECK(nfa_language_agree_upto(dfa_to_nfa(det), dfa_to_nfa(full), 8));
  CHECK(complete_dfa(full).states.size() == full.states.size());

  Dfa comp = complement_dfa(full);
  for (const auto& w : words_upto(full.alphabet, 3))
    CHECK(comp.accepts(w) == !full.accepts(w));
  Dfa twice = complement_dfa(comp);
  CHECK(nfa_language_agree_upto(dfa_to_nfa(full), dfa_to_nfa(twice), 8));

  // the irreducibles acceptor accepts exactly the irreducible terms
  for (const auto& w : words_upto(full.alphabet, 4))
    CHECK(comp.accepts(w) == !oracle_reducible_or_ill_typed(w, pres, R));

  // gluing the irreducibles acceptor gives the small 6-state machine plus
  // one dead class
  Dfa glued = glue_dfa(comp);
  CHECK(glued.states.size() == 7);
  CHECK(glued.terminal.size() == 5);
  CHECK(nfa_language_agree_upto(dfa_to_nfa(comp), dfa_to_nfa(glued), 8));

  Dfa partial;
  partial.states = {"p"};
  partial.alphabet = {"a"};
  partial.tau = {""};
  CHECK_THROWS_AS(complement_dfa(partial), std::invalid_argument);
  Dfa completed = complete_dfa(partial);
  CHECK(completed.states.size() == 2);
  CHECK(completed.is_complete());
}

TEST_CASE("regular expressions for the three target objects") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Dfa irr = build_irreducibles_dfa(pres, R);
  auto alphabet = irr.alphabet;

  RegexPtr kb1 = regex_for_object(irr, pres, "B1");
  RegexPtr kb2 = regex_for_object(irr, pres, "B2");
  RegexPtr kb3 = regex_for_object(irr, pres, "B3");
  CHECK(regex_language_agree_upto(kb1, closed_kb1(), alphabet, 8));
  CHECK(regex_language_agree_upto(kb2, closed_kb2(), alphabet, 8));
  CHECK(regex_language_agree_upto(kb3, closed_kb3(), alphabet, 8));
  // the alternative closed form of the first language
  CHECK(regex_language_agree_upto(kb1, closed_kb1_alt(), alphabet, 8));

  // cross-check against irreducibility directly
  for (const auto& b : {"B1", "B2", "B3"}) {
    RegexPtr r = b == std::string("B1") ? kb1
                 : b == std::string("B2") ? kb2 : kb3;
    auto got = accepted_words(regex_to_nfa(r, alphabet), 5);
    std::vector<Word> want;
    for (const auto& w : words_upto(alphabet, 5)) {
      std::string tgt;
      if (!is_valid_term_word(w, pres, &tgt) || tgt != b) continue;
      if (!oracle_reducible_or_ill_typed(w, pres, R)) want.push_back(w);
    }
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
  CHECK_THROWS_AS(regex_for_object(irr, pres, "nope"), std::invalid_argument);
}

TEST_CASE("Arden solutions satisfy their equations") {
  auto pres = golden::kan_main_example();
  auto R = golden::kan_main_completed();
  Dfa irr = build_irreducibles_dfa(pres, R);
  std::set<int> restricted;
  for (int t : irr.terminal)
    if (irr.tau[static_cast<std::size_t>(t)] == "B1") restricted.insert(t);
  irr.terminal = restricted;
  auto sys = language_equations(irr);
  auto sols = solve_equations(sys);
  REQUIRE(sols.size() == sys.constant.size());
  for (std::size_t i = 0; i < sols.size(); ++i) {
    std::vector<RegexPtr> parts{sys.constant[i]};
    for (std::size_t j = 0; j < sols.size(); ++j)
      parts.push_back(rx_cat({sys.coeff[i][j], sols[j]}));
    CHECK(regex_language_agree_upto(sols[i], rx_alt(parts), irr.alphabet, 8));
  }
}

TEST_CASE("coset representative languages") {
  SECTION("subgroup generated by the squared generator") {
    auto pres = kanrw::build_coset_case(golden::group_abc(), {W("c c")});
    auto res = complete_kan(initial_rules(pres), pres, CompletionBudget{});
    REQUIRE(res.complete);
    Dfa irr = build_irreducibles_dfa(pres, res.rules);
    RegexPtr r = regex_for_object(irr, pres, "m");
    auto got = accepted_words(regex_to_nfa(r, irr.alphabet), 8);
    std::vector<Word> want = {W("H"), W("H a"), W("H a c"), W("H c")};
    CHECK(got == want);
  }
  SECTION("index-two subgroup") {
    auto pres = kanrw::build_coset_case(golden::group_abc(), {W("b")});
    auto res = complete_kan(initial_rules(pres), pres, CompletionBudget{});
    REQUIRE(res.complete);
    Dfa irr = build_irreducibles_dfa(pres, res.rules);
    RegexPtr r = regex_for_object(irr, pres, "m");
    auto got = accepted_words(regex_to_nfa(r, irr.alphabet), 8);
    std::vector<Word> want = {W("H"), W("H c")};
    CHECK(got == want);
  }
}

TEST_CASE("monomial acceptors") {
  SECTION("six-dimensional example") {
    auto [dfa, r] = build_monomial_acceptor(
        {W("e1 e1"), W("e2 e2"), W("e2 e1 e2")}, {"e1", "e2"});
    auto got = accepted_words(dfa_to_nfa(dfa), 6);
    std::vector<Word> want = {W(""), W("e1"), W("e1 e2"), W("e1 e2 e1"),
                              W("e2"), W("e2 e1")};
    CHECK(got == want);
    CHECK(regex_language_agree_upto(r, rx_alt({rx_id(), rx_word("e1"),
                                               rx_word("e1 e2"),
                                               rx_word("e1 e2 e1"),
                                               rx_word("e2"),
                                               rx_word("e2 e1")}),
                                    {"e1", "e2"}, 8));
  }
  SECTION("infinite language example") {
    auto [dfa, r] = build_monomial_acceptor({W("a a a"), W("b a a b")},
                                            {"a", "b"});
    auto has_factor = [](const Word& w, const Word& f) {
      return find_factor(w, f) != word_npos;
    };
    for (const auto& w : words_upto({"a", "b"}, 8)) {
      bool irr = !has_factor(w, W("a a a")) && !has_factor(w, W("b a a b"));
      CHECK(dfa.accepts(w) == irr);
      CHECK(regex_membership(r, w) == irr);
    }
    // the displayed closed form (empty word excluded by its convention)
    RegexPtr a = rx_letter("a"), b = rx_letter("b");
    RegexPtr head = rx_alt({rx_word("a a b"), rx_word("a b"), b});
    RegexPtr mid = rx_star(rx_alt({rx_word("a b"), b}));
    RegexPtr tail = rx_alt({rx_word("a a"), a, rx_id()});
    RegexPtr displayed =
        rx_alt({rx_cat({head, mid, tail}), rx_word("a a"), a});
    for (const auto& w : words_upto({"a", "b"}, 8)) {
      if (w.empty()) continue;
      CHECK(regex_membership(r, w) == regex_membership(displayed, w));
    }
  }
  SECTION("no forbidden factors accepts everything") {
    auto [dfa, r] = build_monomial_acceptor({}, {"a", "b"});
    for (const auto& w : words_upto({"a", "b"}, 4)) {
      CHECK(dfa.accepts(w));
      CHECK(regex_membership(r, w));
    }
  }
}

TEST_CASE("random systems: regex matches irreducibility") {
  std::mt19937 rng(424242);
  auto pick = [&](std::size_t n) { return rng() % n; };
  int built = 0;
  int attempts = 0;
  while (built < 5 && attempts < 200) {
    ++attempts;
    KanPresentation pres;
    pres.obA = {"A"};
    std::size_t nobj = 2;
    pres.delta.objects = {"C1", "C2"};
    std::size_t narr = 3;
    for (std::size_t i = 0; i < narr; ++i)
      pres.delta.arrows.push_back(
          Arrow{"c" + std::to_string(i + 1),
                pres.delta.objects[pick(nobj)],
                pres.delta.objects[pick(nobj)]});
    auto random_path = [&](const std::string& from,
                           std::size_t len) -> std::optional<PathWord> {
      PathWord p{from, {}};
      std::string at = from;
      for (std::size_t i = 0; i < len; ++i) {
        std::vector<Arrow> outs;
        for (const auto& c : pres.delta.arrows)
          if (c.src == at) outs.push_back(c);
        if (outs.empty()) return std::nullopt;
        const Arrow& c = outs[pick(outs.size())];
        p.arrows.push_back(c.label);
        at = c.tgt;
      }
      return p;
    };
    // one relation: two parallel paths
    bool have_rel = false;
    for (int tries = 0; tries < 30 && !have_rel; ++tries) {
      std::string from = pres.delta.objects[pick(nobj)];
      auto l = random_path(from, 2 + pick(2));
      auto r = random_path(from, 1 + pick(2));
      if (!l || !r || l->arrows == r->arrows) continue;
      if (path_target(*l, pres.delta) != path_target(*r, pres.delta))
        continue;
      pres.relB = {PathRule{*l, *r}};
      have_rel = true;
    }
    if (!have_rel) continue;
    pres.fOb["A"] = pres.delta.objects[pick(nobj)];
    auto loop = random_path(pres.fOb["A"], 1 + pick(2));
    if (!loop || path_target(*loop, pres.delta) != pres.fOb["A"]) continue;
    pres.xOb["A"] = {"u1", "u2"};
    pres.arrA = {Arrow{"g", "A", "A"}};
    pres.fArr["g"] = *loop;
    pres.xArr["g"] = {pres.xOb["A"][pick(2)], pres.xOb["A"][pick(2)]};
    try {
      validate_presentation(pres);
    } catch (const std::invalid_argument&) {
      continue;
    }
    auto res = complete_kan(initial_rules(pres), pres,
                            CompletionBudget{200, 30});
    if (!res.complete) continue;
    ++built;
    Dfa irr = build_irreducibles_dfa(pres, res.rules);
    for (const auto& b : pres.delta.objects) {
      RegexPtr r = regex_for_object(irr, pres, b);
      auto got = accepted_words(regex_to_nfa(r, irr.alphabet), 6);
      std::vector<Word> want;
      for (const auto& w : words_upto(irr.alphabet, 6)) {
        std::string tgt;
        if (!is_valid_term_word(w, pres, &tgt) || tgt != b) continue;
        if (!oracle_reducible_or_ill_typed(w, pres, res.rules))
          want.push_back(w);
      }
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
  REQUIRE(built == 5);
}
