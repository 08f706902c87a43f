#ifndef KANRW_IDREL_HPP
#define KANRW_IDREL_HPP

// Identities among relations: free-group words, Y-sequences over a group
// presentation, extra-information rewriting systems (rules carrying a
// Y-sequence witness), their completion, the contracting homotopies h0/h1
// built on the Cayley graph, and the generation of a complete set of
// generators for the module of identities.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kanrw/machines.hpp"

namespace kanrw {

// ---------------------------------------------------------------------------
// Free-group words.  FreeWord (generator, exponent +-1) comes from the
// Cayley-machine header.

inline FreeWord free_reduce(const FreeWord& w) {
  FreeWord out;
  for (const auto& l : w) {
    if (l.second != 1 && l.second != -1)
      throw std::invalid_argument("free-word exponents must be +1 or -1");
    if (!out.empty() && out.back().first == l.first &&
        out.back().second == -l.second)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline FreeWord fg_invert(const FreeWord& w) {
  FreeWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->first, -it->second});
  return out;
}

inline FreeWord fg_concat(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(out);
}

inline FreeWord fg_of(const Word& w) {
  FreeWord out;
  for (const auto& x : w) out.push_back({x, 1});
  return out;
}

inline std::string fg_to_string(const FreeWord& w) {
  if (w.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += w[i].first;
    if (w[i].second == -1) s += "^-1";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Group presentations with labelled relators.  Relators are positive monoid
// words (for a finite group, occurrences of x^-1 in a relator are encoded as
// x^(ord(x)-1) beforehand; see encode_positive).

struct GroupPresentationIR {
  std::vector<std::string> generators;
  std::vector<std::string> relator_labels;
  std::vector<Word> relators;  // positive words, parallel to the labels

  const Word& relator(const std::string& label) const {
    for (std::size_t i = 0; i < relator_labels.size(); ++i)
      if (relator_labels[i] == label) return relators[i];
    throw std::invalid_argument("unknown relator label: " + label);
  }

  // the one-object monoid presentation underlying the group
  CategoryPresentation monoid() const {
    CategoryPresentation pres;
    pres.graph.objects = {"G"};
    for (const auto& x : generators)
      pres.graph.arrows.push_back(Arrow{x, "G", "G"});
    for (const auto& r : relators)
      pres.relations.push_back(
          PathRule{PathWord{"G", r}, PathWord{"G", {}}});
    return pres;
  }
};

inline GroupPresentationIR make_group_ir(
    const std::vector<std::string>& generators,
    const std::vector<std::string>& labels,
    const std::vector<Word>& relators) {
  if (labels.size() != relators.size())
    throw std::invalid_argument("one label per relator required");
  for (const auto& r : relators) {
    if (r.empty()) throw std::invalid_argument("empty relator");
    for (const auto& x : r)
      if (std::find(generators.begin(), generators.end(), x) ==
          generators.end())
        throw std::invalid_argument("undeclared generator in relator: " + x);
  }
  return GroupPresentationIR{generators, labels, relators};
}

// Rewrites x^-1 as x^(order-1); the opt-in encoding for finite groups.
inline Word encode_positive(const FreeWord& w,
                            const std::map<std::string, int>& orders) {
  Word out;
  for (const auto& [x, exp] : free_reduce(w)) {
    if (exp == 1) {
      out.push_back(x);
    } else {
      auto it = orders.find(x);
      if (it == orders.end())
        throw std::invalid_argument("order of generator unknown: " + x);
      for (int k = 0; k < it->second - 1; ++k) out.push_back(x);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Y-sequences: formal products of conjugated relators (rho, u)^eps.

struct YTerm {
  std::string relator;
  int sign = 1;   // +1 or -1
  FreeWord conj;  // freely reduced

  friend bool operator==(const YTerm& a, const YTerm& b) {
    return a.relator == b.relator && a.sign == b.sign && a.conj == b.conj;
  }
};

using YSequence = std::vector<YTerm>;

inline YSequence yseq_concat(const YSequence& a, const YSequence& b) {
  YSequence out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline YSequence yseq_invert(const YSequence& a) {
  YSequence out;
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    out.push_back(YTerm{it->relator, -it->sign, it->conj});
  return out;
}

// the right action of F(X): (rho, u)^v = (rho, uv)
inline YSequence yseq_act(const YSequence& a, const FreeWord& v) {
  YSequence out = a;
  for (auto& t : out) t.conj = fg_concat(t.conj, v);
  return out;
}

// delta_2((rho,u)^eps) = u^-1 w(rho)^eps u, multiplied in sequence order
inline FreeWord boundary(const YSequence& a, const GroupPresentationIR& pres) {
  FreeWord out;
  for (const auto& t : a) {
    FreeWord rel = fg_of(pres.relator(t.relator));
    if (t.sign == -1) rel = fg_invert(rel);
    out = fg_concat(out, fg_concat(fg_invert(t.conj),
                                   fg_concat(rel, t.conj)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extra-information rewriting systems: rules (lhs, witness, rhs) with
// lhs = delta_2(witness) * rhs in F(X).

struct EirsRule {
  Word lhs;
  YSequence witness;
  Word rhs;
};

using Eirs = std::vector<EirsRule>;

inline bool eirs_rule_valid(const EirsRule& rule,
                            const GroupPresentationIR& pres) {
  return fg_concat(boundary(rule.witness, pres), fg_of(rule.rhs)) ==
         fg_of(rule.lhs);
}

inline Eirs initial_eirs(const GroupPresentationIR& pres) {
  Eirs out;
  for (std::size_t i = 0; i < pres.relators.size(); ++i)
    out.push_back(EirsRule{pres.relators[i],
                           {YTerm{pres.relator_labels[i], 1, {}}},
                           {}});
  return out;
}

// ---------------------------------------------------------------------------
// ReduceWord2 on free-group words.  A rule lhs matches a contiguous run of
// positive letters; each application w = u*lhs*v -> u*rhs*v contributes the
// rule's witness conjugated by u^-1, so that w = delta_2(c) * z throughout.

struct ReduceWord2Result {
  YSequence witness;
  FreeWord reduced;
};

inline ReduceWord2Result reduce_word2_free(const FreeWord& input,
                                           const Eirs& eirs,
                                           std::size_t step_limit = 100000) {
  ReduceWord2Result res;
  FreeWord w = free_reduce(input);
  for (std::size_t step = 0;; ++step) {
    if (step >= step_limit)
      throw std::invalid_argument("reduction did not terminate");
    std::size_t best_pos = w.size() + 1;
    const EirsRule* best = nullptr;
    for (const auto& rule : eirs) {
      const Word& l = rule.lhs;
      if (l.empty() || l.size() > w.size()) continue;
      for (std::size_t i = 0; i + l.size() <= w.size() && i < best_pos; ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < l.size(); ++k)
          if (w[i + k].second != 1 || w[i + k].first != l[k]) {
            ok = false;
            break;
          }
        if (ok) {
          best_pos = i;
          best = &rule;
          break;
        }
      }
    }
    if (!best) break;
    FreeWord u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(best_pos));
    res.witness = yseq_concat(res.witness,
                              yseq_act(best->witness, fg_invert(u)));
    FreeWord next = u;
    for (const auto& x : best->rhs) next.push_back({x, 1});
    next.insert(next.end(),
                w.begin() + static_cast<std::ptrdiff_t>(best_pos +
                                                        best->lhs.size()),
                w.end());
    w = free_reduce(next);
  }
  res.reduced = w;
  return res;
}

// positive-word form: positive input stays positive under positive rules
inline std::pair<YSequence, Word> reduce_word2(const Word& w,
                                               const Eirs& eirs) {
  ReduceWord2Result res = reduce_word2_free(fg_of(w), eirs);
  Word z;
  for (const auto& [x, exp] : res.reduced) {
    if (exp != 1)
      throw std::logic_error("positive reduction produced an inverse");
    z.push_back(x);
  }
  return {res.witness, z};
}

// ---------------------------------------------------------------------------
// KB2: Knuth-Bendix completion carrying witnesses.  For an overlap with
// left context u1 of the rule (l1,c1,r1) against (l2,c2,r2), the two
// reductions (d1,z1), (d2,z2) of the critical pair are joined by the rule
// (z1, d1^-1 (c1^{u1^-1})^-1 c2 d2, z2) when z1 > z2, and the mirror
// otherwise.

struct Kb2Result {
  Eirs eirs;
  bool complete = false;
};

namespace detail_idrel {

inline YSequence join_witness(const YSequence& d1, const YSequence& c1,
                              const FreeWord& u1, const YSequence& c2,
                              const YSequence& d2) {
  return yseq_concat(
      yseq_concat(yseq_invert(d1),
                  yseq_invert(yseq_act(c1, fg_invert(u1)))),
      yseq_concat(c2, d2));
}

}  // namespace detail_idrel

inline Eirs interreduce_eirs(Eirs rules, const GraphSpec& graph) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      Eirs others;
      for (std::size_t j = 0; j < rules.size(); ++j)
        if (j != i) others.push_back(rules[j]);
      auto [d, z] = reduce_word2(rules[i].lhs, others);
      auto [e, z2] = reduce_word2(rules[i].rhs, others);
      if (z == rules[i].lhs && z2 == rules[i].rhs) continue;
      // lhs = delta2(d) z and lhs = delta2(c e) z2, so the survivor rule
      // relates z and z2
      EirsRule replacement;
      if (z == z2) {
        rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      YSequence ce = yseq_concat(rules[i].witness, e);
      if (lenlex_compare_words(z, z2, graph) == Ordering::greater)
        replacement = EirsRule{z, yseq_concat(yseq_invert(d), ce), z2};
      else
        replacement =
            EirsRule{z2, yseq_concat(yseq_invert(ce), d), z};
      rules[i] = replacement;
      changed = true;
    }
  }
  return rules;
}

inline Kb2Result kb2(const Eirs& input, const GroupPresentationIR& pres,
                     const CompletionBudget& budget = {}) {
  GraphSpec graph = pres.monoid().graph;
  Eirs rules = interreduce_eirs(input, graph);
  Kb2Result out;
  for (int pass = 0; pass < budget.max_passes; ++pass) {
    Eirs fresh;
    auto consider = [&](const Word& left, const YSequence& d1_c,
                        const Word& right, const YSequence& d2_c) {
      // left and right are the two descendants of an overlap word,
      // pre-multiplied by the witnesses d1_c and d2_c respectively
      auto [e1, z1] = reduce_word2(left, rules);
      auto [e2, z2] = reduce_word2(right, rules);
      YSequence d1 = yseq_concat(d1_c, e1);
      YSequence d2 = yseq_concat(d2_c, e2);
      if (z1 == z2) return;
      EirsRule rule;
      if (lenlex_compare_words(z1, z2, graph) == Ordering::greater)
        rule = EirsRule{z1, yseq_concat(yseq_invert(d1), d2), z2};
      else
        rule = EirsRule{z2, yseq_concat(yseq_invert(d2), d1), z1};
      auto [e3, z3] = reduce_word2(rule.lhs, fresh);
      if (z3 != rule.lhs) return;  // already covered this pass
      fresh.push_back(rule);
    };
    for (std::size_t i = 0; i < rules.size(); ++i)
      for (std::size_t j = 0; j < rules.size(); ++j) {
        const Word& l1 = rules[i].lhs;
        const Word& l2 = rules[j].lhs;
        // containment: l2 = u * l1 * v with (i,j) distinct rules
        if (i != j && l1.size() <= l2.size())
          for (std::size_t p = 0; p + l1.size() <= l2.size(); ++p) {
            if (!std::equal(l1.begin(), l1.end(), l2.begin() + p)) continue;
            Word u(l2.begin(), l2.begin() + static_cast<std::ptrdiff_t>(p));
            Word v(l2.begin() + static_cast<std::ptrdiff_t>(p + l1.size()),
                   l2.end());
            Word left = u;
            left.insert(left.end(), rules[i].rhs.begin(),
                        rules[i].rhs.end());
            left.insert(left.end(), v.begin(), v.end());
            consider(left, yseq_act(rules[i].witness, fg_invert(fg_of(u))),
                     rules[j].rhs, rules[j].witness);
          }
        // boundary: proper suffix of l1 = proper prefix of l2 of length k;
        // the overlap word is head * l2 = l1 * tail with head = l1 minus
        // the suffix and tail = l2 minus the prefix
        for (std::size_t k = 1; k < l1.size() && k < l2.size(); ++k) {
          if (!std::equal(l1.end() - static_cast<std::ptrdiff_t>(k), l1.end(),
                          l2.begin()))
            continue;
          Word head(l1.begin(), l1.end() - static_cast<std::ptrdiff_t>(k));
          Word tail(l2.begin() + static_cast<std::ptrdiff_t>(k), l2.end());
          Word left = head;
          left.insert(left.end(), rules[j].rhs.begin(), rules[j].rhs.end());
          Word right = rules[i].rhs;
          right.insert(right.end(), tail.begin(), tail.end());
          consider(left, yseq_act(rules[j].witness, fg_invert(fg_of(head))),
                   right, rules[i].witness);
        }
      }
    if (fresh.empty()) {
      out.eirs = std::move(rules);
      out.complete = true;
      return out;
    }
    rules.insert(rules.end(), fresh.begin(), fresh.end());
    rules = interreduce_eirs(std::move(rules), graph);
    if (static_cast<int>(rules.size()) > budget.max_rules) break;
  }
  out.eirs = std::move(rules);
  out.complete = false;
  return out;
}

// ---------------------------------------------------------------------------
// Contracting homotopies on the Cayley graph and the identity generators.

struct IdrelContext {
  GroupPresentationIR pres;
  Eirs eirs;                  // complete
  std::vector<PathRule> r1;   // the underlying plain rules
  CayleyGraph graph;
};

inline IdrelContext build_idrel_context(const GroupPresentationIR& pres,
                                        const CompletionBudget& budget = {},
                                        std::size_t limit = 1000) {
  IdrelContext ctx;
  ctx.pres = pres;
  Kb2Result res = kb2(initial_eirs(pres), pres, budget);
  if (!res.complete)
    throw std::invalid_argument("completion budget exhausted");
  ctx.eirs = std::move(res.eirs);
  for (const auto& rule : ctx.eirs)
    ctx.r1.push_back(PathRule{PathWord{"G", rule.lhs},
                              PathWord{"G", rule.rhs}});
  ctx.graph = build_cayley(pres.monoid(), ctx.r1, limit);
  return ctx;
}

// h0(g) is the inverse of the normal-form path from id to g
inline FreeWord compute_h0(const Word& normal_form) {
  return fg_invert(fg_of(normal_form));
}

// h1[g,x]: witness of the reduction of N(g) x N(g theta(x))^-1 to id
inline YSequence compute_h1(const IdrelContext& ctx, const Word& g,
                            const std::string& x) {
  Word gx = g;
  gx.push_back(x);
  Word target = reduce_word(gx, ctx.r1);
  FreeWord w = fg_concat(fg_of(gx), fg_invert(fg_of(target)));
  ReduceWord2Result res = reduce_word2_free(w, ctx.eirs);
  if (!res.reduced.empty())
    throw std::logic_error("h1 witness did not close the edge cycle");
  return res.witness;
}

struct IdentityRecord {
  Word g;               // normal form of the base vertex
  std::string relator;
  YSequence sequence;   // sep(g, relator)
};

// sep(g,r) = (h1 of the relator cycle at g)^-1 followed by (r, N(g)^-1);
// tree edges contribute nothing to h1.
inline std::vector<IdentityRecord> generate_identities(
    const GroupPresentationIR& pres, const CompletionBudget& budget = {},
    std::size_t limit = 1000) {
  IdrelContext ctx = build_idrel_context(pres, budget, limit);
  std::set<std::pair<int, std::string>> tree;
  for (const auto& e : ctx.graph.edges)
    if (e.in_tree) tree.insert({e.src, e.generator});
  std::vector<IdentityRecord> out;
  for (const auto& g : ctx.graph.labels) {
    for (std::size_t ri = 0; ri < pres.relators.size(); ++ri) {
      YSequence h;
      Word v = g;
      for (const auto& x : pres.relators[ri]) {
        int vi = ctx.graph.vertex_of(v);
        if (!tree.count({vi, x}))
          h = yseq_concat(h, compute_h1(ctx, v, x));
        Word vx = v;
        vx.push_back(x);
        v = reduce_word(vx, ctx.r1);
      }
      if (v != g)
        throw std::logic_error("relator cycle did not close");
      YSequence seq = yseq_concat(
          yseq_invert(h),
          {YTerm{pres.relator_labels[ri], 1, fg_invert(fg_of(g))}});
      out.push_back(IdentityRecord{g, pres.relator_labels[ri], seq});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The alpha map into the free ZG-module on the relator labels, and the
// primary identity property.

struct GroupRingVector {
  // relator label -> (group element normal form -> integer coefficient)
  std::map<std::string, std::map<Word, int>> comp;

  bool is_zero() const { return comp.empty(); }
};

inline GroupRingVector alpha_map(const YSequence& a,
                                 const IdrelContext& ctx) {
  GroupRingVector out;
  for (const auto& t : a) {
    Word g = cayley_normal_form(ctx.graph, t.conj);
    auto& cell = out.comp[t.relator][g];
    cell += t.sign;
    if (cell == 0) {
      out.comp[t.relator].erase(g);
      if (out.comp[t.relator].empty()) out.comp.erase(t.relator);
    }
  }
  return out;
}

// True iff the terms pair off with equal relator, theta-equal conjugators
// and opposite signs; requires the boundary to be trivial.
inline bool primary_identity_check(const YSequence& a,
                                   const IdrelContext& ctx) {
  if (!free_reduce(boundary(a, ctx.pres)).empty())
    throw std::invalid_argument("not an identity sequence");
  std::map<std::pair<std::string, Word>, int> balance;
  for (const auto& t : a)
    balance[{t.relator, cayley_normal_form(ctx.graph, t.conj)}] += t.sign;
  for (const auto& [key, count] : balance)
    if (count != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Single Peiffer reduction steps (the four rule families): used to observe
// the collapse of conjugated relators in small cyclic groups.

inline std::optional<YSequence> peiffer_step(const YSequence& a,
                                             const GroupPresentationIR& pres) {
  auto same = [](const YTerm& s, const YTerm& t) {
    return s.relator == t.relator &&
           free_reduce(s.conj) == free_reduce(t.conj);
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    // y^eps y^-eps -> empty
    if (i + 1 < a.size() && same(a[i], a[i + 1]) &&
        a[i].sign == -a[i + 1].sign) {
      YSequence out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
      out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i + 2),
                 a.end());
      return out;
    }
    // y^-eps z^eta y^eps -> z^{eta delta(y^eps)}
    if (i + 2 < a.size() && same(a[i], a[i + 2]) &&
        a[i].sign == -a[i + 2].sign) {
      FreeWord d = boundary({a[i + 2]}, pres);
      YTerm z = a[i + 1];
      z.conj = fg_concat(z.conj, d);
      YSequence out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(z);
      out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i + 3),
                 a.end());
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace kanrw

#endif  // KANRW_IDREL_HPP
