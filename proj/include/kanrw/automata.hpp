#ifndef KANRW_AUTOMATA_HPP
#define KANRW_AUTOMATA_HPP

// Acceptors for the irreducible tagged terms of a complete mixed rewriting
// system: non-deterministic construction, subset determinization, completion,
// complementation, behavioural gluing, right-linear language equations solved
// by Arden's rule, and regular expressions per target object.  Also a factor
// acceptor for sets of forbidden monomials.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kanrw/kan.hpp"

namespace kanrw {

// ---------------------------------------------------------------------------
// Regular expressions.

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

struct Regex {
  enum class Kind { empty, id, letter, cat, alt, star };
  Kind kind = Kind::empty;
  std::string sym;            // letter payload
  std::vector<RegexPtr> kids; // cat/alt children, star child
};

inline RegexPtr rx_empty() {
  static const RegexPtr r = std::make_shared<Regex>(Regex{Regex::Kind::empty});
  return r;
}

inline RegexPtr rx_id() {
  static const RegexPtr r = std::make_shared<Regex>(Regex{Regex::Kind::id});
  return r;
}

inline RegexPtr rx_letter(const std::string& s) {
  auto r = std::make_shared<Regex>();
  r->kind = Regex::Kind::letter;
  r->sym = s;
  return r;
}

inline std::string regex_to_string(const RegexPtr& r);

// Conservative smart constructors: absorb the empty language and the empty
// word, flatten nested unions/concatenations, drop duplicate union branches.

inline RegexPtr rx_alt(std::vector<RegexPtr> parts) {
  std::vector<RegexPtr> flat;
  std::set<std::string> seen;
  for (auto& p : parts) {
    std::vector<RegexPtr> sub =
        p->kind == Regex::Kind::alt ? p->kids : std::vector<RegexPtr>{p};
    for (auto& q : sub) {
      if (q->kind == Regex::Kind::empty) continue;
      if (seen.insert(regex_to_string(q)).second) flat.push_back(q);
    }
  }
  if (flat.empty()) return rx_empty();
  if (flat.size() == 1) return flat.front();
  auto r = std::make_shared<Regex>();
  r->kind = Regex::Kind::alt;
  r->kids = std::move(flat);
  return r;
}

inline RegexPtr rx_cat(std::vector<RegexPtr> parts) {
  std::vector<RegexPtr> flat;
  for (auto& p : parts) {
    if (p->kind == Regex::Kind::empty) return rx_empty();
    if (p->kind == Regex::Kind::id) continue;
    if (p->kind == Regex::Kind::cat)
      flat.insert(flat.end(), p->kids.begin(), p->kids.end());
    else
      flat.push_back(p);
  }
  if (flat.empty()) return rx_id();
  if (flat.size() == 1) return flat.front();
  auto r = std::make_shared<Regex>();
  r->kind = Regex::Kind::cat;
  r->kids = std::move(flat);
  return r;
}

inline RegexPtr rx_star(const RegexPtr& p) {
  if (p->kind == Regex::Kind::empty || p->kind == Regex::Kind::id)
    return rx_id();
  if (p->kind == Regex::Kind::star) return p;
  auto r = std::make_shared<Regex>();
  r->kind = Regex::Kind::star;
  r->kids = {p};
  return r;
}

inline std::string regex_to_string(const RegexPtr& r) {
  switch (r->kind) {
    case Regex::Kind::empty:
      return "0";
    case Regex::Kind::id:
      return "id";
    case Regex::Kind::letter:
      return r->sym;
    case Regex::Kind::star: {
      std::string inner = regex_to_string(r->kids.front());
      bool atom = r->kids.front()->kind == Regex::Kind::letter;
      return atom ? inner + "*" : "(" + inner + ")*";
    }
    case Regex::Kind::cat: {
      std::string out;
      for (const auto& k : r->kids) {
        std::string part = regex_to_string(k);
        if (k->kind == Regex::Kind::alt) part = "(" + part + ")";
        if (!out.empty()) out += " ";
        out += part;
      }
      return out;
    }
    case Regex::Kind::alt: {
      std::string out;
      for (const auto& k : r->kids) {
        if (!out.empty()) out += "+";
        out += regex_to_string(k);
      }
      return out;
    }
  }
  return "0";
}

// Membership via a Thompson-style epsilon-NFA compiled from the syntax tree.
namespace detail {

struct ThompsonNfa {
  std::vector<std::multimap<std::string, int>> step;  // letter -> successors
  std::vector<std::vector<int>> eps;
  int start = 0;
  int accept = 0;

  int add_state() {
    step.emplace_back();
    eps.emplace_back();
    return static_cast<int>(step.size()) - 1;
  }
};

// Returns (start, accept) fragment for r.
inline std::pair<int, int> thompson_build(const RegexPtr& r, ThompsonNfa& m) {
  int s = m.add_state();
  int t = m.add_state();
  switch (r->kind) {
    case Regex::Kind::empty:
      break;  // no path from s to t
    case Regex::Kind::id:
      m.eps[s].push_back(t);
      break;
    case Regex::Kind::letter:
      m.step[s].emplace(r->sym, t);
      break;
    case Regex::Kind::cat: {
      int prev = s;
      for (const auto& k : r->kids) {
        auto [a, b] = thompson_build(k, m);
        m.eps[prev].push_back(a);
        prev = b;
      }
      m.eps[prev].push_back(t);
      break;
    }
    case Regex::Kind::alt:
      for (const auto& k : r->kids) {
        auto [a, b] = thompson_build(k, m);
        m.eps[s].push_back(a);
        m.eps[b].push_back(t);
      }
      break;
    case Regex::Kind::star: {
      auto [a, b] = thompson_build(r->kids.front(), m);
      m.eps[s].push_back(a);
      m.eps[s].push_back(t);
      m.eps[b].push_back(a);
      m.eps[b].push_back(t);
      break;
    }
  }
  return {s, t};
}

inline void eps_closure(const ThompsonNfa& m, std::set<int>& states) {
  std::vector<int> stack(states.begin(), states.end());
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : m.eps[s])
      if (states.insert(t).second) stack.push_back(t);
  }
}

}  // namespace detail

inline bool regex_membership(const RegexPtr& r, const Word& w) {
  detail::ThompsonNfa m;
  auto [s, t] = detail::thompson_build(r, m);
  std::set<int> cur{s};
  detail::eps_closure(m, cur);
  for (const auto& letter : w) {
    std::set<int> next;
    for (int st : cur) {
      auto range = m.step[st].equal_range(letter);
      for (auto it = range.first; it != range.second; ++it)
        next.insert(it->second);
    }
    detail::eps_closure(m, next);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  return cur.count(t) > 0;
}

// ---------------------------------------------------------------------------
// Automata.

struct Nfa {
  std::vector<std::string> states;  // unique labels
  std::vector<std::string> alphabet;
  std::set<int> initial;
  std::set<int> terminal;
  std::map<std::pair<int, int>, std::set<int>> transition;  // (state, letter)
  // typing class of each state (target object of the tracked prefix), empty
  // when the state carries no typing information (start, dump)
  std::vector<std::string> tau;

  int state_index(const std::string& label) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == label) return static_cast<int>(i);
    return -1;
  }
  int letter_index(const std::string& letter) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == letter) return static_cast<int>(i);
    return -1;
  }
};

inline bool nfa_accepts(const Nfa& nfa, const Word& w) {
  std::set<int> cur = nfa.initial;
  for (const auto& letter : w) {
    int li = nfa.letter_index(letter);
    if (li < 0) return false;
    std::set<int> next;
    for (int s : cur) {
      auto it = nfa.transition.find({s, li});
      if (it != nfa.transition.end())
        next.insert(it->second.begin(), it->second.end());
    }
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  for (int s : cur)
    if (nfa.terminal.count(s)) return true;
  return false;
}

struct Dfa {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  int initial = 0;
  std::map<std::pair<int, int>, int> transition;  // partial
  std::set<int> terminal;
  std::vector<std::string> tau;  // typing class, may be empty per state

  int letter_index(const std::string& letter) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == letter) return static_cast<int>(i);
    return -1;
  }
  bool is_complete() const {
    for (std::size_t s = 0; s < states.size(); ++s)
      for (std::size_t a = 0; a < alphabet.size(); ++a)
        if (!transition.count({static_cast<int>(s), static_cast<int>(a)}))
          return false;
    return true;
  }
  bool accepts(const Word& w) const {  // crash rejects
    int cur = initial;
    for (const auto& letter : w) {
      int li = letter_index(letter);
      if (li < 0) return false;
      auto it = transition.find({cur, li});
      if (it == transition.end()) return false;
      cur = it->second;
    }
    return terminal.count(cur) > 0;
  }
};

// ---------------------------------------------------------------------------
// The reducibility acceptor: accepts exactly the strings over
// (elements + arrows) that are ill-typed or contain a rule left-hand side,
// i.e. the complement of the irreducible terms.

inline std::string term_prefix_label(const std::string& tag, const Word& w) {
  std::string out = tag + "|";
  for (std::size_t i = 0; i < w.size(); ++i)
    out += (i ? " " : "") + w[i];
  return out;
}

inline std::string path_prefix_label(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + w[i];
  return out;
}

inline Nfa build_reducibility_nfa(const KanPresentation& pres,
                                  const MixedRewriteSystem& R) {
  Nfa nfa;
  for (const auto& x : pres.elements()) nfa.alphabet.push_back(x);
  for (const auto& b : pres.delta.arrows) nfa.alphabet.push_back(b.label);

  std::set<std::pair<std::string, Word>> Lt, PPLt;
  std::set<Word> Lp, PPLp;
  for (const auto& r : R.t_rules) {
    const Word& w = r.lhs.path.arrows;
    Lt.insert({r.lhs.tag, w});
    for (std::size_t k = 1; k < w.size(); ++k)
      PPLt.insert({r.lhs.tag, Word(w.begin(), w.begin() + k)});
  }
  for (const auto& r : R.p_rules) {
    const Word& w = r.lhs.arrows;
    Lp.insert(w);
    for (std::size_t k = 1; k < w.size(); ++k)
      PPLp.insert(Word(w.begin(), w.begin() + k));
  }

  // states: s0, ObDelta, elements, PPL(R_T), PPL(R_P), D
  auto add_state = [&](const std::string& label, const std::string& tau) {
    nfa.states.push_back(label);
    nfa.tau.push_back(tau);
    return static_cast<int>(nfa.states.size()) - 1;
  };
  int s0 = add_state("s0", "");
  for (const auto& B : pres.delta.objects) add_state(B, B);
  for (const auto& x : pres.elements())
    add_state(x, pres.f_object(pres.element_object(x)));
  std::map<std::pair<std::string, Word>, int> tstate;
  for (const auto& [tag, w] : PPLt) {
    PathWord p{pres.f_object(pres.element_object(tag)), w};
    tstate[{tag, w}] = add_state(term_prefix_label(tag, w),
                                 path_target(p, pres.delta));
  }
  std::map<Word, int> pstate;
  for (const auto& w : PPLp) {
    PathWord p{pres.delta.arrow(w.front()).src, w};
    pstate[w] = add_state(path_prefix_label(w), path_target(p, pres.delta));
  }
  int D = add_state("D", "");
  nfa.initial = {s0};
  nfa.terminal = {s0, D};

  auto elem_count = pres.elements().size();
  auto arrow = [&](int li) -> const Arrow& {
    return pres.delta.arrow(nfa.alphabet[static_cast<std::size_t>(li)]);
  };
  auto obj_state = [&](const std::string& B) { return nfa.state_index(B); };

  // continuation from a typed prefix state: the object track always follows
  // tgt(b); the matching tracks follow prefixes of rule left-hand sides
  auto typed_step = [&](const std::string& at, int li,
                        const std::string& ttag,
                        const Word& tprefix) -> std::set<int> {
    const Arrow& b = arrow(li);
    if (b.src != at) return {D};
    std::set<int> out;
    bool dead = false;
    if (!ttag.empty()) {  // the T-prefix track (tag state or PPL(R_T) state)
      Word ext = tprefix;
      ext.push_back(b.label);
      if (Lt.count({ttag, ext})) dead = true;
      auto it = tstate.find({ttag, ext});
      if (it != tstate.end()) out.insert(it->second);
    }
    {  // the P-prefix track starting at this letter
      Word one{b.label};
      if (Lp.count(one)) dead = true;
      auto it = pstate.find(one);
      if (it != pstate.end()) out.insert(it->second);
    }
    if (dead) return {D};
    out.insert(obj_state(b.tgt));
    return out;
  };
  auto p_prefix_step = [&](const Word& w, const std::string& at,
                           int li) -> std::set<int> {
    const Arrow& b = arrow(li);
    if (b.src != at) return {D};
    Word ext = w;
    ext.push_back(b.label);
    if (Lp.count(ext)) return {D};
    auto it = pstate.find(ext);
    std::set<int> out;
    if (it != pstate.end()) out.insert(it->second);
    out.insert(obj_state(b.tgt));
    return out;
  };

  for (std::size_t s = 0; s < nfa.states.size(); ++s) {
    for (std::size_t li = 0; li < nfa.alphabet.size(); ++li) {
      int si = static_cast<int>(s);
      int l = static_cast<int>(li);
      std::set<int> succ;
      bool is_element_letter = li < elem_count;
      if (si == D) {
        succ = {D};
      } else if (si == s0) {
        if (is_element_letter) {
          const std::string& x = nfa.alphabet[li];
          succ = Lt.count({x, {}}) ? std::set<int>{D}
                                   : std::set<int>{nfa.state_index(x)};
        } else {
          succ = {D};
        }
      } else if (is_element_letter) {
        succ = {D};  // a tag anywhere after the front is ill-typed
      } else {
        const std::string& label = nfa.states[s];
        int oi = -1;
        for (std::size_t k = 0; k < pres.delta.objects.size(); ++k)
          if (pres.delta.objects[k] == label) oi = static_cast<int>(k);
        if (oi >= 0) {
          succ = typed_step(label, l, "", {});
        } else {
          // element tag, T-prefix or P-prefix state?
          bool handled = false;
          for (const auto& x : pres.elements())
            if (x == label) {
              succ = typed_step(nfa.tau[s], l, x, {});
              handled = true;
              break;
            }
          if (!handled) {
            for (const auto& [key, idx] : tstate)
              if (idx == si) {
                succ = typed_step(nfa.tau[s], l, key.first, key.second);
                handled = true;
                break;
              }
          }
          if (!handled) {
            for (const auto& [w, idx] : pstate)
              if (idx == si) {
                succ = p_prefix_step(w, nfa.tau[s], l);
                handled = true;
                break;
              }
          }
        }
      }
      nfa.transition[{si, l}] = succ;
    }
  }
  return nfa;
}

// ---------------------------------------------------------------------------
// Subset determinization via the transition tree (breadth-first, letters in
// alphabet order); subset states keep a typing class when any member has one.

inline Dfa determinize(const Nfa& nfa) {
  Dfa dfa;
  dfa.alphabet = nfa.alphabet;
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> subsets;
  auto subset_label = [&](const std::vector<int>& sub) {
    std::string out = "{";
    for (std::size_t i = 0; i < sub.size(); ++i)
      out += (i ? "," : "") + nfa.states[static_cast<std::size_t>(sub[i])];
    return out + "}";
  };
  auto intern = [&](const std::vector<int>& sub) {
    auto it = index.find(sub);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(subsets.size());
    index[sub] = id;
    subsets.push_back(sub);
    dfa.states.push_back(subset_label(sub));
    std::string tau;
    for (int s : sub)
      if (!nfa.tau[static_cast<std::size_t>(s)].empty())
        tau = nfa.tau[static_cast<std::size_t>(s)];
    dfa.tau.push_back(tau);
    bool term = false;
    for (int s : sub) term = term || nfa.terminal.count(s);
    if (term) dfa.terminal.insert(id);
    return id;
  };
  std::vector<int> start(nfa.initial.begin(), nfa.initial.end());
  dfa.initial = intern(start);
  std::queue<int> work;
  work.push(dfa.initial);
  std::set<int> done;
  while (!work.empty()) {
    int cur = work.front();
    work.pop();
    if (!done.insert(cur).second) continue;
    std::vector<int> sub = subsets[static_cast<std::size_t>(cur)];
    for (std::size_t li = 0; li < nfa.alphabet.size(); ++li) {
      std::set<int> next;
      for (int s : sub) {
        auto it = nfa.transition.find({s, static_cast<int>(li)});
        if (it != nfa.transition.end())
          next.insert(it->second.begin(), it->second.end());
      }
      if (next.empty()) continue;
      int id = intern(std::vector<int>(next.begin(), next.end()));
      dfa.transition[{cur, static_cast<int>(li)}] = id;
      if (!done.count(id)) work.push(id);
    }
  }
  return dfa;
}

inline Dfa complete_dfa(Dfa dfa) {
  if (dfa.is_complete()) return dfa;
  std::string label = "dump";
  while (std::find(dfa.states.begin(), dfa.states.end(), label) !=
         dfa.states.end())
    label += "_";
  int dump = static_cast<int>(dfa.states.size());
  dfa.states.push_back(label);
  dfa.tau.push_back("");
  for (std::size_t s = 0; s < dfa.states.size(); ++s)
    for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
      std::pair<int, int> key{static_cast<int>(s), static_cast<int>(a)};
      if (!dfa.transition.count(key)) dfa.transition[key] = dump;
    }
  return dfa;
}

inline Dfa complement_dfa(Dfa dfa) {
  if (!dfa.is_complete())
    throw std::invalid_argument("complement requires a complete automaton");
  std::set<int> flipped;
  for (std::size_t s = 0; s < dfa.states.size(); ++s)
    if (!dfa.terminal.count(static_cast<int>(s)))
      flipped.insert(static_cast<int>(s));
  dfa.terminal = std::move(flipped);
  return dfa;
}

// Behavioural gluing: merge states with identical terminality and identical
// successor classes, iterated to a fixed point (partition refinement).
inline Dfa glue_dfa(const Dfa& dfa) {
  std::size_t n = dfa.states.size();
  std::vector<int> cls(n);
  for (std::size_t s = 0; s < n; ++s)
    cls[s] = dfa.terminal.count(static_cast<int>(s)) ? 1 : 0;
  bool changed = true;
  while (changed) {
    std::map<std::vector<int>, int> sig_index;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<int> sig{cls[s]};
      for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
        auto it = dfa.transition.find({static_cast<int>(s),
                                       static_cast<int>(a)});
        sig.push_back(it == dfa.transition.end()
                          ? -1
                          : cls[static_cast<std::size_t>(it->second)]);
      }
      auto [pos, fresh] =
          sig_index.emplace(sig, static_cast<int>(sig_index.size()));
      next[s] = pos->second;
      (void)fresh;
    }
    changed = next != cls;
    cls = std::move(next);
  }
  int nclasses = *std::max_element(cls.begin(), cls.end()) + 1;
  Dfa out;
  out.alphabet = dfa.alphabet;
  out.states.assign(static_cast<std::size_t>(nclasses), "");
  out.tau.assign(static_cast<std::size_t>(nclasses), "");
  for (std::size_t s = 0; s < n; ++s) {
    auto c = static_cast<std::size_t>(cls[s]);
    if (out.states[c].empty()) {
      out.states[c] = dfa.states[s];
      out.tau[c] = dfa.tau[s];
    }
    if (dfa.terminal.count(static_cast<int>(s)))
      out.terminal.insert(cls[s]);
  }
  out.initial = cls[static_cast<std::size_t>(dfa.initial)];
  for (const auto& [key, to] : dfa.transition)
    out.transition[{cls[static_cast<std::size_t>(key.first)], key.second}] =
        cls[static_cast<std::size_t>(to)];
  return out;
}

// ---------------------------------------------------------------------------
// Right-linear language equations X_i = sum_j A_ij X_j + E_i over the live
// states (reachable from the initial state and co-reachable to a terminal),
// indexed in breadth-first order from the initial state; solved bottom-up by
// Arden's rule.

struct LanguageEquationSystem {
  std::vector<std::vector<RegexPtr>> coeff;  // finite letter unions
  std::vector<RegexPtr> constant;            // id or the empty language
  std::vector<int> dfa_state;                // equation index -> dfa state
};

inline LanguageEquationSystem language_equations(const Dfa& dfa) {
  std::size_t n = dfa.states.size();
  // co-reachability to a terminal state
  std::vector<std::vector<int>> rev(n);
  for (const auto& [key, to] : dfa.transition)
    rev[static_cast<std::size_t>(to)].push_back(key.first);
  std::vector<bool> live(n, false);
  std::queue<int> work;
  for (int t : dfa.terminal) {
    live[static_cast<std::size_t>(t)] = true;
    work.push(t);
  }
  while (!work.empty()) {
    int s = work.front();
    work.pop();
    for (int p : rev[static_cast<std::size_t>(s)])
      if (!live[static_cast<std::size_t>(p)]) {
        live[static_cast<std::size_t>(p)] = true;
        work.push(p);
      }
  }
  // breadth-first order over live reachable states, initial first
  LanguageEquationSystem sys;
  std::map<int, int> eq_index;
  if (live[static_cast<std::size_t>(dfa.initial)]) {
    std::queue<int> bfs;
    bfs.push(dfa.initial);
    eq_index[dfa.initial] = 0;
    sys.dfa_state.push_back(dfa.initial);
    while (!bfs.empty()) {
      int s = bfs.front();
      bfs.pop();
      for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
        auto it = dfa.transition.find({s, static_cast<int>(a)});
        if (it == dfa.transition.end()) continue;
        int to = it->second;
        if (!live[static_cast<std::size_t>(to)] || eq_index.count(to))
          continue;
        eq_index[to] = static_cast<int>(sys.dfa_state.size());
        sys.dfa_state.push_back(to);
        bfs.push(to);
      }
    }
  }
  std::size_t m = sys.dfa_state.size();
  sys.coeff.assign(m, std::vector<RegexPtr>(m, rx_empty()));
  sys.constant.assign(m, rx_empty());
  for (std::size_t i = 0; i < m; ++i) {
    int s = sys.dfa_state[i];
    if (dfa.terminal.count(s)) sys.constant[i] = rx_id();
    for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
      auto it = dfa.transition.find({s, static_cast<int>(a)});
      if (it == dfa.transition.end()) continue;
      auto jt = eq_index.find(it->second);
      if (jt == eq_index.end()) continue;  // dead successor: empty language
      auto j = static_cast<std::size_t>(jt->second);
      sys.coeff[i][j] =
          rx_alt({sys.coeff[i][j], rx_letter(dfa.alphabet[a])});
    }
  }
  return sys;
}

// Eliminates from the highest equation index downwards, applying Arden's rule
// X = A*E to remove each self-loop; returns one regex per equation.
inline std::vector<RegexPtr> solve_equations(LanguageEquationSystem sys) {
  std::size_t m = sys.constant.size();
  if (m == 0) return {};
  for (auto& row : sys.coeff)
    for (auto& c : row)
      if (regex_membership(c, {}))
        throw std::invalid_argument(
            "equation coefficient contains the empty word");
  // solved[i]: expression over strictly lower-indexed unknowns
  std::vector<std::vector<RegexPtr>> low(m);   // low[i][j], j < i
  std::vector<RegexPtr> cst(m);
  for (std::size_t step = m; step-- > 0;) {
    // substitute already-eliminated higher unknowns (may feed the self-loop)
    for (std::size_t j = m; j-- > step + 1;) {
      RegexPtr a = sys.coeff[step][j];
      if (a->kind == Regex::Kind::empty) continue;
      sys.coeff[step][j] = rx_empty();
      sys.constant[step] = rx_alt({sys.constant[step],
                                   rx_cat({a, cst[j]})});
      for (std::size_t k = 0; k < j; ++k)
        sys.coeff[step][k] = rx_alt({sys.coeff[step][k],
                                     rx_cat({a, low[j][k]})});
    }
    RegexPtr loop = rx_star(sys.coeff[step][step]);
    for (std::size_t j = 0; j < m; ++j)
      sys.coeff[step][j] =
          j == step ? rx_empty() : rx_cat({loop, sys.coeff[step][j]});
    sys.constant[step] = rx_cat({loop, sys.constant[step]});
    low[step].assign(sys.coeff[step].begin(),
                     sys.coeff[step].begin() +
                         static_cast<std::ptrdiff_t>(step));
    cst[step] = sys.constant[step];
  }
  // back-substitute upwards to make every solution closed
  std::vector<RegexPtr> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    RegexPtr v = cst[i];
    for (std::size_t k = 0; k < i; ++k)
      v = rx_alt({v, rx_cat({low[i][k], out[k]})});
    out[i] = v;
  }
  return out;
}

// The language of the irreducible-terms acceptor restricted to terms whose
// target object is b.
inline RegexPtr regex_for_object(const Dfa& irr_acceptor,
                                 const KanPresentation& pres,
                                 const std::string& b) {
  if (!pres.delta.has_object(b))
    throw std::invalid_argument("unknown object: " + b);
  Dfa dfa = irr_acceptor;
  std::set<int> restricted;
  for (int t : dfa.terminal)
    if (dfa.tau[static_cast<std::size_t>(t)] == b) restricted.insert(t);
  dfa.terminal = std::move(restricted);
  auto sols = solve_equations(language_equations(dfa));
  return sols.empty() ? rx_empty() : sols.front();
}

// Convenience: the full pipeline from a completed system to the irreducible
// acceptor (complete and complemented, typing classes preserved).
inline Dfa build_irreducibles_dfa(const KanPresentation& pres,
                                  const MixedRewriteSystem& R) {
  return complement_dfa(complete_dfa(determinize(build_reducibility_nfa(
      pres, R))));
}

// ---------------------------------------------------------------------------
// Factor acceptor: words over `alphabet` containing no element of
// `leading_monomials` as a factor, plus a regex for that language.

inline std::pair<Dfa, RegexPtr> build_monomial_acceptor(
    const std::vector<Word>& leading_monomials,
    const std::vector<std::string>& alphabet) {
  Nfa nfa;
  nfa.alphabet = alphabet;
  std::set<Word> L(leading_monomials.begin(), leading_monomials.end());
  std::set<Word> PPL;
  for (const auto& w : leading_monomials)
    for (std::size_t k = 1; k < w.size(); ++k)
      PPL.insert(Word(w.begin(), w.begin() + k));
  nfa.states.push_back("q0");
  nfa.tau.push_back("");
  std::map<Word, int> pstate;
  for (const auto& w : PPL) {
    pstate[w] = static_cast<int>(nfa.states.size());
    nfa.states.push_back(path_prefix_label(w));
    nfa.tau.push_back("");
  }
  int D = static_cast<int>(nfa.states.size());
  nfa.states.push_back("D");
  nfa.tau.push_back("");
  nfa.initial = {0};
  nfa.terminal = {D};
  auto extend = [&](const Word& prefix, const std::string& a,
                    std::set<int>& succ) {
    Word ext = prefix;
    ext.push_back(a);
    if (L.count(ext)) succ.insert(D);
    auto it = pstate.find(ext);
    if (it != pstate.end()) succ.insert(it->second);
  };
  for (std::size_t a = 0; a < alphabet.size(); ++a) {
    {
      std::set<int> succ{0};  // restart matching at every position
      extend({}, alphabet[a], succ);
      nfa.transition[{0, static_cast<int>(a)}] = succ;
    }
    for (const auto& [w, s] : pstate) {
      std::set<int> succ;
      extend(w, alphabet[a], succ);
      if (!succ.empty())
        nfa.transition[{s, static_cast<int>(a)}] = succ;
    }
    nfa.transition[{D, static_cast<int>(a)}] = {D};
  }
  Dfa acceptor = complement_dfa(complete_dfa(determinize(nfa)));
  auto sols = solve_equations(language_equations(acceptor));
  return {acceptor, sols.empty() ? rx_empty() : sols.front()};
}

// ---------------------------------------------------------------------------
// Comparison plumbing: regexes and automata are compared by bounded language
// agreement, never by printed form.

inline Nfa regex_to_nfa(const RegexPtr& r,
                        const std::vector<std::string>& alphabet) {
  detail::ThompsonNfa m;
  auto [s, t] = detail::thompson_build(r, m);
  // eliminate epsilon transitions by closing each state
  std::size_t n = m.step.size();
  Nfa nfa;
  nfa.alphabet = alphabet;
  for (std::size_t i = 0; i < n; ++i) {
    nfa.states.push_back("q" + std::to_string(i));
    nfa.tau.push_back("");
  }
  std::vector<std::set<int>> closure(n);
  for (std::size_t i = 0; i < n; ++i) {
    closure[i] = {static_cast<int>(i)};
    detail::eps_closure(m, closure[i]);
  }
  nfa.initial = closure[static_cast<std::size_t>(s)];
  for (std::size_t i = 0; i < n; ++i)
    if (closure[i].count(t)) nfa.terminal.insert(static_cast<int>(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      std::set<int> succ;
      for (int c : closure[i]) {
        auto range = m.step[static_cast<std::size_t>(c)].equal_range(
            alphabet[a]);
        for (auto it = range.first; it != range.second; ++it)
          succ.insert(it->second);
      }
      if (!succ.empty())
        nfa.transition[{static_cast<int>(i), static_cast<int>(a)}] = succ;
    }
  return nfa;
}

inline Nfa dfa_to_nfa(const Dfa& dfa) {
  Nfa nfa;
  nfa.states = dfa.states;
  nfa.alphabet = dfa.alphabet;
  nfa.tau = dfa.tau;
  nfa.initial = {dfa.initial};
  nfa.terminal = dfa.terminal;
  for (const auto& [key, to] : dfa.transition) nfa.transition[key] = {to};
  return nfa;
}

// True iff the two acceptors agree on every word of length <= maxlen.
// Implemented as a breadth-first product walk over subset pairs, so the cost
// is bounded by the reachable pair count rather than the word count.
inline bool nfa_language_agree_upto(const Nfa& a, const Nfa& b,
                                    std::size_t maxlen) {
  if (a.alphabet != b.alphabet)
    throw std::invalid_argument("alphabet mismatch in language comparison");
  auto accepts = [](const Nfa& nfa, const std::set<int>& cur) {
    for (int s : cur)
      if (nfa.terminal.count(s)) return true;
    return false;
  };
  using PairState = std::pair<std::set<int>, std::set<int>>;
  std::set<PairState> seen;
  std::queue<std::pair<PairState, std::size_t>> work;
  PairState start{a.initial, b.initial};
  seen.insert(start);
  work.push({start, 0});
  while (!work.empty()) {
    auto [cur, depth] = work.front();
    work.pop();
    if (accepts(a, cur.first) != accepts(b, cur.second)) return false;
    if (depth == maxlen) continue;
    for (std::size_t li = 0; li < a.alphabet.size(); ++li) {
      PairState next;
      for (int s : cur.first) {
        auto it = a.transition.find({s, static_cast<int>(li)});
        if (it != a.transition.end())
          next.first.insert(it->second.begin(), it->second.end());
      }
      for (int s : cur.second) {
        auto it = b.transition.find({s, static_cast<int>(li)});
        if (it != b.transition.end())
          next.second.insert(it->second.begin(), it->second.end());
      }
      if (seen.insert(next).second) work.push({next, depth + 1});
    }
  }
  return true;
}

inline bool regex_language_agree_upto(const RegexPtr& x, const RegexPtr& y,
                                      const std::vector<std::string>& alphabet,
                                      std::size_t maxlen) {
  return nfa_language_agree_upto(regex_to_nfa(x, alphabet),
                                 regex_to_nfa(y, alphabet), maxlen);
}

// ---------------------------------------------------------------------------
// Bounded word enumeration (shared oracle plumbing).

inline std::vector<Word> words_upto(const std::vector<std::string>& alphabet,
                                    std::size_t maxlen) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= maxlen; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& a : alphabet) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace kanrw

#endif  // KANRW_AUTOMATA_HPP
