#ifndef KANRW_MACHINES_HPP
#define KANRW_MACHINES_HPP

// Reduction machines with output: Moore machines realizing the normal-form
// function of a finite Kan extension, and Cayley-graph machines realizing
// group normal forms via a length-lex spanning tree.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kanrw/kan.hpp"

namespace kanrw {

// ---------------------------------------------------------------------------
// Moore machines.  States are the census classes keyed by their normal form,
// plus the start state s0 and the dump state d; the output of a class is its
// normal form and the output of s0 and d is 0 (absent).

struct MooreMachine {
  std::vector<std::string> alphabet;  // element symbols then arrow labels
  // state 0 = s0, state 1 = d, classes from 2 upwards
  int s0 = 0;
  int d = 1;
  std::vector<TaggedTerm> outputs;              // outputs[i] for state i+2
  std::map<std::string, int> class_of;          // term key of nf -> state
  std::map<std::pair<int, int>, int> delta;     // total on (state, letter)

  std::size_t state_count() const { return outputs.size() + 2; }
  int letter_index(const std::string& letter) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == letter) return static_cast<int>(i);
    return -1;
  }
  // the output map: normal form for class states, absent (0) for s0 and d
  std::optional<TaggedTerm> lambda(int state) const {
    if (state < 2) return std::nullopt;
    return outputs[static_cast<std::size_t>(state) - 2];
  }
};

inline MooreMachine build_moore(const KanPresentation& pres,
                                const MixedRewriteSystem& R,
                                std::size_t limit = 1000) {
  KanResult census = enumerate_kan(R, pres, limit);
  if (census.overflow)
    throw std::invalid_argument(
        "reduction machine requires a finite extension (limit " +
        std::to_string(limit) + " exceeded)");
  MooreMachine m;
  for (const auto& x : pres.elements()) m.alphabet.push_back(x);
  for (const auto& b : pres.delta.arrows) m.alphabet.push_back(b.label);
  for (const auto& B : pres.delta.objects) {
    auto it = census.by_object.find(B);
    if (it == census.by_object.end()) continue;
    for (const auto& t : it->second) {
      m.class_of[term_key(t)] = static_cast<int>(m.outputs.size()) + 2;
      m.outputs.push_back(t);
    }
  }
  std::size_t elem_count = pres.elements().size();
  auto class_of_term = [&](const TaggedTerm& t) {
    return m.class_of.at(term_key(reduce_term(t, R)));
  };
  for (std::size_t li = 0; li < m.alphabet.size(); ++li) {
    int l = static_cast<int>(li);
    // s0: an element symbol enters the class of x|id, anything else dumps
    if (li < elem_count) {
      const std::string& x = m.alphabet[li];
      TaggedTerm t{x, PathWord{pres.f_object(pres.element_object(x)), {}}};
      m.delta[{m.s0, l}] = class_of_term(t);
    } else {
      m.delta[{m.s0, l}] = m.d;
    }
    m.delta[{m.d, l}] = m.d;
    for (std::size_t c = 0; c < m.outputs.size(); ++c) {
      int state = static_cast<int>(c) + 2;
      if (li < elem_count) {
        m.delta[{state, l}] = m.d;
        continue;
      }
      const Arrow& b = pres.delta.arrow(m.alphabet[li]);
      const TaggedTerm& t = m.outputs[c];
      if (term_target(t, pres.delta) != b.src) {
        m.delta[{state, l}] = m.d;
      } else {
        TaggedTerm q = t;
        q.path.arrows.push_back(b.label);
        m.delta[{state, l}] = class_of_term(q);
      }
    }
  }
  return m;
}

// Runs the machine on the encoding of t (tag, then the path letters); returns
// the stored normal form, or absent (the 0 output) for ill-typed input.
inline std::optional<TaggedTerm> run_moore(const MooreMachine& m,
                                           const TaggedTerm& t) {
  int state = m.s0;
  auto step = [&](const std::string& letter) {
    int li = m.letter_index(letter);
    state = li < 0 ? m.d : m.delta.at({state, li});
  };
  step(t.tag);
  for (const auto& b : t.path.arrows) step(b);
  return m.lambda(state);
}

// ---------------------------------------------------------------------------
// Cayley-graph reduction machines.

struct CayleyEdge {
  int src = 0;               // vertex indices
  std::string generator;
  int tgt = 0;
  bool in_tree = false;
};

struct CayleyGraph {
  std::vector<std::string> generators;  // in declaration order
  std::vector<Word> labels;             // normal forms, length-lex order
  std::vector<CayleyEdge> edges;        // |G| x |generators|, grouped by src
  std::map<std::string, int> generator_order;  // order of each generator

  int vertex_of(const Word& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    return -1;
  }
};

// A letter of a free-group word: generator name and exponent +1 or -1.
using FreeLetter = std::pair<std::string, int>;
using FreeWord = std::vector<FreeLetter>;

inline CayleyGraph build_cayley(const CategoryPresentation& group,
                                const std::vector<PathRule>& R,
                                std::size_t limit = 1000) {
  if (group.graph.objects.size() != 1)
    throw std::invalid_argument("Cayley machine expects a one-object group");
  const std::string& B = group.graph.objects.front();
  auto census = enumerate_elements(R, group.graph, limit);
  if (census.overflow)
    throw std::invalid_argument("Cayley machine requires a finite group");
  CayleyGraph g;
  for (const auto& a : group.graph.arrows) g.generators.push_back(a.label);
  for (const auto& p : census.by_hom.at({B, B})) g.labels.push_back(p.arrows);

  auto nf = [&](const Word& w) { return reduce_word(w, R); };
  std::map<Word, int> index;
  for (std::size_t i = 0; i < g.labels.size(); ++i)
    index[g.labels[i]] = static_cast<int>(i);

  for (const auto& x : g.generators) {
    Word w;
    int ord = -1;
    for (int k = 1; k <= static_cast<int>(limit); ++k) {
      w.push_back(x);
      if (nf(w).empty()) {
        ord = k;
        break;
      }
    }
    if (ord < 0)
      throw std::invalid_argument("generator order not found: " + x);
    g.generator_order[x] = ord;
  }

  // grow the spanning tree: vertices in length-lex (= discovery) order,
  // generators in order, keeping an edge exactly when its target is new
  std::set<int> discovered{0};
  for (std::size_t v = 0; v < g.labels.size(); ++v) {
    for (const auto& x : g.generators) {
      Word wx = g.labels[v];
      wx.push_back(x);
      int to = index.at(nf(wx));
      bool fresh = discovered.insert(to).second;
      g.edges.push_back(CayleyEdge{static_cast<int>(v), x, to, fresh});
    }
  }
  return g;
}

// Walks the graph from id; a positive letter follows the out-edge, a negative
// letter traverses the unique in-edge with that generator label backwards
// (or, when positive_powers is set, follows x^(order-1) forwards).
inline Word cayley_normal_form(const CayleyGraph& g, const FreeWord& w,
                               bool positive_powers = false) {
  std::map<std::pair<int, std::string>, int> out, in;
  for (const auto& e : g.edges) {
    out[{e.src, e.generator}] = e.tgt;
    in[{e.tgt, e.generator}] = e.src;
  }
  int at = 0;
  for (const auto& [x, exp] : w) {
    if (!g.generator_order.count(x))
      throw std::invalid_argument("unknown generator: " + x);
    if (exp == 1) {
      at = out.at({at, x});
    } else if (exp == -1) {
      if (positive_powers) {
        int ord = g.generator_order.at(x);
        for (int k = 0; k < ord - 1; ++k) at = out.at({at, x});
      } else {
        at = in.at({at, x});
      }
    } else {
      throw std::invalid_argument("free-word exponents must be +1 or -1");
    }
  }
  return g.labels[static_cast<std::size_t>(at)];
}

}  // namespace kanrw

#endif  // KANRW_MACHINES_HPP
