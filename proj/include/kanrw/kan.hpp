#ifndef KANRW_KAN_HPP
#define KANRW_KAN_HPP

// Kan-extension presentations kan<Gamma|Delta|RelB|X|F>, the set T of tagged
// terms x|p, mixed one-sided/two-sided rewriting, overlap analysis,
// completion, enumeration, special-case builders and iterated composition.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kanrw/presentations.hpp"

namespace kanrw {

struct KanPresentation {
  // Gamma
  std::vector<std::string> obA;
  std::vector<Arrow> arrA;  // labelled (src,tgt) pairs over obA
  // Delta with its relations
  GraphSpec delta;
  std::vector<PathRule> relB;
  // F: Gamma -> Delta (object map; arrow map to paths of P(Delta))
  std::map<std::string, std::string> fOb;
  std::map<std::string, PathWord> fArr;
  // X: Gamma -> Sets (element sets per object; action rows per arrow)
  std::map<std::string, std::vector<std::string>> xOb;
  std::map<std::string, std::vector<std::string>> xArr;

  GraphSpec gamma() const {
    GraphSpec g;
    g.objects = obA;
    g.arrows = arrA;
    return g;
  }

  // Elements in declaration order: obA order, then each object's list.
  std::vector<std::string> elements() const {
    std::vector<std::string> out;
    for (const auto& ob : obA) {
      auto it = xOb.find(ob);
      if (it == xOb.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
  }

  int tag_index(const std::string& x) const {
    int i = 0;
    for (const auto& ob : obA) {
      auto it = xOb.find(ob);
      if (it == xOb.end()) continue;
      for (const auto& e : it->second) {
        if (e == x) return i;
        ++i;
      }
    }
    return -1;
  }

  // The object A with x in XA.
  const std::string& element_object(const std::string& x) const {
    for (const auto& ob : obA) {
      auto it = xOb.find(ob);
      if (it == xOb.end()) continue;
      for (const auto& e : it->second)
        if (e == x) return ob;
    }
    throw std::invalid_argument("unknown element symbol: " + x);
  }

  const std::string& f_object(const std::string& a) const {
    auto it = fOb.find(a);
    if (it == fOb.end())
      throw std::invalid_argument("F undefined on object " + a);
    return it->second;
  }
};

// An element x|p of T: a set element paired with a composable path of Delta
// starting at F(A) where x is in XA.
struct TaggedTerm {
  std::string tag;
  PathWord path;

  bool operator==(const TaggedTerm& o) const {
    return tag == o.tag && path == o.path;
  }
  bool operator!=(const TaggedTerm& o) const { return !(*this == o); }
};

inline std::string term_target(const TaggedTerm& t, const GraphSpec& delta) {
  return path_target(t.path, delta);
}

struct TRule {
  TaggedTerm lhs;
  TaggedTerm rhs;
  bool operator==(const TRule& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
};

struct MixedRewriteSystem {
  std::vector<TRule> t_rules;
  std::vector<PathRule> p_rules;
};

// ---------------------------------------------------------------------------
// Validation.

inline void validate_presentation(const KanPresentation& pres) {
  GraphSpec gamma = pres.gamma();
  gamma.validate();
  pres.delta.validate();
  for (const auto& r : pres.relB) {
    validate_path(r.lhs, pres.delta);
    validate_path(r.rhs, pres.delta);
    if (r.lhs.source != r.rhs.source ||
        path_target(r.lhs, pres.delta) != path_target(r.rhs, pres.delta))
      throw std::invalid_argument("relation of Delta is not parallel");
  }
  for (const auto& ob : pres.obA)
    if (!pres.delta.has_object(pres.f_object(ob)))
      throw std::invalid_argument("F sends object " + ob +
                                  " outside Delta");
  // F must be a graph morphism
  for (std::size_t i = 0; i < pres.arrA.size(); ++i) {
    const Arrow& a = pres.arrA[i];
    auto it = pres.fArr.find(a.label);
    if (it == pres.fArr.end())
      throw std::invalid_argument("F undefined on arrow #" +
                                  std::to_string(i) + " (" + a.label + ")");
    validate_path(it->second, pres.delta);
    if (it->second.source != pres.f_object(a.src) ||
        path_target(it->second, pres.delta) != pres.f_object(a.tgt))
      throw std::invalid_argument("F(" + a.label +
                                  ") does not run F(src)->F(tgt)");
  }
  // element symbols globally distinct from each other and from arrow labels
  std::set<std::string> seen;
  for (const auto& x : pres.elements()) {
    if (!seen.insert(x).second)
      throw std::invalid_argument("duplicate element symbol: " + x);
    if (pres.delta.arrow_index(x) >= 0)
      throw std::invalid_argument("element symbol clashes with arrow: " + x);
  }
  // each action row matches X(src a) elementwise into X(tgt a)
  for (std::size_t i = 0; i < pres.arrA.size(); ++i) {
    const Arrow& a = pres.arrA[i];
    auto src = pres.xOb.find(a.src);
    auto row = pres.xArr.find(a.label);
    std::size_t n = src == pres.xOb.end() ? 0 : src->second.size();
    if (row == pres.xArr.end() || row->second.size() != n)
      throw std::invalid_argument("action row arity mismatch on arrow #" +
                                  std::to_string(i) + " (" + a.label + ")");
    auto tgt = pres.xOb.find(a.tgt);
    for (const auto& y : row->second) {
      bool ok = tgt != pres.xOb.end() &&
                std::find(tgt->second.begin(), tgt->second.end(), y) !=
                    tgt->second.end();
      if (!ok)
        throw std::invalid_argument("action of " + a.label +
                                    " leaves X(tgt): " + y);
    }
  }
}

inline void validate_term(const TaggedTerm& t, const KanPresentation& pres) {
  const std::string& A = pres.element_object(t.tag);
  if (t.path.source != pres.f_object(A))
    throw std::invalid_argument("term path does not start at F(A)");
  validate_path(t.path, pres.delta);
}

// ---------------------------------------------------------------------------
// The ordering >_T on tagged terms: list length (tag included), then the tag
// by element declaration order, then the first differing arrow position under
// the arrow order of Delta.

inline Ordering compare_terms(const TaggedTerm& a, const TaggedTerm& b,
                              const KanPresentation& pres) {
  std::size_t la = 1 + a.path.arrows.size();
  std::size_t lb = 1 + b.path.arrows.size();
  if (la != lb) return la < lb ? Ordering::less : Ordering::greater;
  int ta = pres.tag_index(a.tag);
  int tb = pres.tag_index(b.tag);
  if (ta < 0) throw std::invalid_argument("unknown element symbol: " + a.tag);
  if (tb < 0) throw std::invalid_argument("unknown element symbol: " + b.tag);
  if (ta != tb) return ta < tb ? Ordering::less : Ordering::greater;
  return lenlex_compare_words(a.path.arrows, b.path.arrows, pres.delta);
}

// ---------------------------------------------------------------------------
// Initial rules: one epsilon-rule x|Fa -> x.a|id per (arrow a, x in X(src a)),
// plus the K-rules RelB.  Trivial epsilon-rules (x|id -> x|id) are dropped;
// tag-to-tag rules are oriented by tag order.

inline const std::string& act(const KanPresentation& pres,
                              const std::string& arrow_label,
                              const std::string& x) {
  const Arrow& a = pres.gamma().arrow(arrow_label);
  const auto& src_elems = pres.xOb.at(a.src);
  const auto& row = pres.xArr.at(arrow_label);
  for (std::size_t i = 0; i < src_elems.size(); ++i)
    if (src_elems[i] == x) return row[i];
  throw std::invalid_argument("element " + x + " not acted on by " +
                              arrow_label);
}

inline MixedRewriteSystem initial_rules(const KanPresentation& pres) {
  MixedRewriteSystem sys;
  for (const auto& a : pres.arrA) {
    auto elems = pres.xOb.count(a.src) ? pres.xOb.at(a.src)
                                       : std::vector<std::string>{};
    for (const auto& x : elems) {
      const std::string& xa = act(pres, a.label, x);
      TaggedTerm lhs{x, pres.fArr.at(a.label)};
      TaggedTerm rhs{xa, PathWord{pres.f_object(a.tgt), {}}};
      Ordering o = compare_terms(lhs, rhs, pres);
      if (o == Ordering::equal) continue;  // trivial action on identity path
      if (o == Ordering::greater)
        sys.t_rules.push_back(TRule{lhs, rhs});
      else
        sys.t_rules.push_back(TRule{rhs, lhs});
    }
  }
  for (const auto& r : pres.relB) {
    auto oriented = orient_rule(r.lhs, r.rhs, pres.delta);
    if (oriented) sys.p_rules.push_back(*oriented);
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Reduction on T.  A T-rule x|p -> y|r applies to x|p.q, rewriting the tag
// and a prefix of the path; a P-rule rewrites any factor of the path.

inline bool t_rule_applies(const TaggedTerm& t, const TRule& r) {
  if (t.tag != r.lhs.tag) return false;
  const Word& p = r.lhs.path.arrows;
  if (p.size() > t.path.arrows.size()) return false;
  return matches_at(t.path.arrows, p, 0);
}

inline bool is_irreducible_term(const TaggedTerm& t,
                                const MixedRewriteSystem& R) {
  for (const auto& r : R.t_rules)
    if (t_rule_applies(t, r)) return false;
  return is_irreducible_word(t.path.arrows, R.p_rules);
}

inline TaggedTerm reduce_term(TaggedTerm t, const MixedRewriteSystem& R) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : R.t_rules) {
      if (t_rule_applies(t, r)) {
        Word tail(t.path.arrows.begin() +
                      static_cast<std::ptrdiff_t>(r.lhs.path.arrows.size()),
                  t.path.arrows.end());
        t = TaggedTerm{r.rhs.tag,
                       PathWord{r.rhs.path.source,
                                concat(r.rhs.path.arrows, tail)}};
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t pos = 0; pos < t.path.arrows.size() && !changed; ++pos) {
      for (const auto& r : R.p_rules) {
        if (matches_at(t.path.arrows, r.lhs.arrows, pos)) {
          t.path.arrows =
              splice(t.path.arrows, pos, r.lhs.arrows.size(), r.rhs.arrows);
          changed = true;
          break;
        }
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Overlap analysis.  Five types: (i) T-T prefix overlap, (ii) P-P factor
// containment, (iii) P-P boundary, (iv) T-P boundary, (v) T-P containment.

enum class OverlapKind { tt, pp_contain, pp_boundary, tp_boundary, tp_contain };

struct CriticalPair {
  OverlapKind kind;
  bool is_term;  // term pair or path pair
  TaggedTerm tleft, tright;
  PathWord pleft, pright;
};

inline std::vector<CriticalPair> find_overlaps(const MixedRewriteSystem& R) {
  std::vector<CriticalPair> out;
  // (i) T-T: lhs_j is a prefix-in-T of lhs_i (same tag, path prefix)
  for (std::size_t i = 0; i < R.t_rules.size(); ++i) {
    const TRule& ri = R.t_rules[i];
    for (std::size_t j = 0; j < R.t_rules.size(); ++j) {
      const TRule& rj = R.t_rules[j];
      if (ri.lhs.tag != rj.lhs.tag) continue;
      const Word& wi = ri.lhs.path.arrows;
      const Word& wj = rj.lhs.path.arrows;
      if (wj.size() > wi.size()) continue;
      if (i == j && wj.size() == wi.size()) continue;
      if (!matches_at(wi, wj, 0)) continue;
      Word q(wi.begin() + static_cast<std::ptrdiff_t>(wj.size()), wi.end());
      CriticalPair cp;
      cp.kind = OverlapKind::tt;
      cp.is_term = true;
      cp.tleft = ri.rhs;
      cp.tright = TaggedTerm{rj.rhs.tag,
                             PathWord{rj.rhs.path.source,
                                      concat(rj.rhs.path.arrows, q)}};
      out.push_back(cp);
    }
  }
  // (ii)+(iii) P-P, as for plain systems
  for (std::size_t i = 0; i < R.p_rules.size(); ++i) {
    const Word& li = R.p_rules[i].lhs.arrows;
    const PathWord& ri = R.p_rules[i].rhs;
    for (std::size_t j = 0; j < R.p_rules.size(); ++j) {
      const Word& lj = R.p_rules[j].lhs.arrows;
      const PathWord& rj = R.p_rules[j].rhs;
      if (lj.size() <= li.size()) {
        for (std::size_t pos = 0; pos + lj.size() <= li.size(); ++pos) {
          if (i == j && lj.size() == li.size()) continue;
          if (!matches_at(li, lj, pos)) continue;
          CriticalPair cp;
          cp.kind = OverlapKind::pp_contain;
          cp.is_term = false;
          cp.pleft = ri;
          cp.pright = PathWord{R.p_rules[i].lhs.source,
                               splice(li, pos, lj.size(), rj.arrows)};
          out.push_back(cp);
        }
      }
      std::size_t maxk = std::min(li.size(), lj.size());
      for (std::size_t k = 1; k < maxk; ++k) {
        bool ok = true;
        for (std::size_t t = 0; t < k && ok; ++t)
          ok = li[li.size() - k + t] == lj[t];
        if (!ok) continue;
        Word tail(lj.begin() + static_cast<std::ptrdiff_t>(k), lj.end());
        Word head(li.begin(),
                  li.begin() + static_cast<std::ptrdiff_t>(li.size() - k));
        CriticalPair cp;
        cp.kind = OverlapKind::pp_boundary;
        cp.is_term = false;
        cp.pleft = PathWord{ri.source, concat(ri.arrows, tail)};
        cp.pright = PathWord{R.p_rules[i].lhs.source, concat(head, rj.arrows)};
        out.push_back(cp);
      }
    }
  }
  // (iv)+(v) T-P
  for (std::size_t i = 0; i < R.t_rules.size(); ++i) {
    const TRule& ti = R.t_rules[i];
    const Word& w = ti.lhs.path.arrows;
    for (std::size_t j = 0; j < R.p_rules.size(); ++j) {
      const Word& l = R.p_rules[j].lhs.arrows;
      const Word& r = R.p_rules[j].rhs.arrows;
      // (v) containment: l occurs as a factor of w
      for (std::size_t pos = 0; pos + l.size() <= w.size(); ++pos) {
        if (!matches_at(w, l, pos)) continue;
        CriticalPair cp;
        cp.kind = OverlapKind::tp_contain;
        cp.is_term = true;
        cp.tleft = ti.rhs;
        cp.tright = TaggedTerm{
            ti.lhs.tag,
            PathWord{ti.lhs.path.source, splice(w, pos, l.size(), r)}};
        out.push_back(cp);
      }
      // (iv) boundary: a suffix of w is a proper prefix of l
      std::size_t maxk = std::min(w.size(), l.size() - 1);
      for (std::size_t k = 1; k <= maxk; ++k) {
        bool ok = true;
        for (std::size_t t = 0; t < k && ok; ++t)
          ok = w[w.size() - k + t] == l[t];
        if (!ok) continue;
        Word tail(l.begin() + static_cast<std::ptrdiff_t>(k), l.end());
        Word head(w.begin(),
                  w.begin() + static_cast<std::ptrdiff_t>(w.size() - k));
        CriticalPair cp;
        cp.kind = OverlapKind::tp_boundary;
        cp.is_term = true;
        cp.tleft = TaggedTerm{ti.rhs.tag,
                              PathWord{ti.rhs.path.source,
                                       concat(ti.rhs.path.arrows, tail)}};
        cp.tright = TaggedTerm{
            ti.lhs.tag, PathWord{ti.lhs.path.source, concat(head, r)}};
        out.push_back(cp);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interreduction of a mixed system.

inline bool t_rule_less(const TRule& a, const TRule& b,
                        const KanPresentation& pres) {
  Ordering o = compare_terms(a.lhs, b.lhs, pres);
  if (o != Ordering::equal) return o == Ordering::less;
  o = compare_terms(a.rhs, b.rhs, pres);
  return o == Ordering::less;
}

inline MixedRewriteSystem normalize_mixed(MixedRewriteSystem R,
                                          const KanPresentation& pres) {
  bool changed = true;
  while (changed) {
    changed = false;
    R.p_rules = normalize_system(std::move(R.p_rules), pres.delta);
    for (std::size_t i = 0; i < R.t_rules.size(); ++i) {
      MixedRewriteSystem others;
      others.p_rules = R.p_rules;
      for (std::size_t j = 0; j < R.t_rules.size(); ++j)
        if (j != i) others.t_rules.push_back(R.t_rules[j]);
      TaggedTerm l = reduce_term(R.t_rules[i].lhs, others);
      TaggedTerm r = reduce_term(R.t_rules[i].rhs, others);
      if (l == R.t_rules[i].lhs && r == R.t_rules[i].rhs) continue;
      changed = true;
      Ordering o = compare_terms(l, r, pres);
      if (o == Ordering::equal) {
        R.t_rules.erase(R.t_rules.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
      } else if (o == Ordering::greater) {
        R.t_rules[i] = TRule{l, r};
      } else {
        R.t_rules[i] = TRule{r, l};
      }
    }
    for (std::size_t i = 0; i < R.t_rules.size(); ++i)
      for (std::size_t j = i + 1; j < R.t_rules.size(); ++j)
        if (R.t_rules[i] == R.t_rules[j]) {
          R.t_rules.erase(R.t_rules.begin() + static_cast<std::ptrdiff_t>(j));
          --j;
          changed = true;
        }
  }
  std::sort(R.t_rules.begin(), R.t_rules.end(),
            [&](const TRule& a, const TRule& b) {
              return t_rule_less(a, b, pres);
            });
  return R;
}

// ---------------------------------------------------------------------------
// Completion.

struct KanCompletionResult {
  MixedRewriteSystem rules;
  bool complete = false;
  int passes = 0;
};

inline KanCompletionResult complete_kan(const MixedRewriteSystem& initial,
                                        const KanPresentation& pres,
                                        const CompletionBudget& budget) {
  if (budget.max_rules <= 0 || budget.max_passes <= 0)
    throw std::invalid_argument("completion budget must be positive");
  MixedRewriteSystem R = normalize_mixed(initial, pres);
  KanCompletionResult res;
  for (int pass = 1; pass <= budget.max_passes; ++pass) {
    res.passes = pass;
    auto pairs = find_overlaps(R);
    bool added = false;
    for (const auto& cp : pairs) {
      if (cp.is_term) {
        TaggedTerm a = reduce_term(cp.tleft, R);
        TaggedTerm b = reduce_term(cp.tright, R);
        if (a == b) continue;
        Ordering o = compare_terms(a, b, pres);
        if (o == Ordering::equal) continue;
        R.t_rules.push_back(o == Ordering::greater ? TRule{a, b}
                                                   : TRule{b, a});
      } else {
        Word a = reduce_word(cp.pleft.arrows, R.p_rules);
        Word b = reduce_word(cp.pright.arrows, R.p_rules);
        if (a == b) continue;
        PathWord pa{a.empty() ? cp.pleft.source
                              : pres.delta.arrow(a.front()).src,
                    a};
        PathWord pb{b.empty() ? cp.pright.source
                              : pres.delta.arrow(b.front()).src,
                    b};
        auto oriented = orient_rule(pa, pb, pres.delta);
        if (!oriented) continue;
        R.p_rules.push_back(*oriented);
      }
      added = true;
      if (static_cast<int>(R.t_rules.size() + R.p_rules.size()) >
          budget.max_rules) {
        res.rules = normalize_mixed(std::move(R), pres);
        res.complete = false;
        return res;
      }
    }
    R = normalize_mixed(std::move(R), pres);
    if (!added) {
      res.rules = std::move(R);
      res.complete = true;
      return res;
    }
  }
  res.rules = std::move(R);
  res.complete = false;
  return res;
}

// ---------------------------------------------------------------------------
// Enumeration: length-stratified census of irreducible tagged terms,
// partitioned by target object in Delta.

struct KanResult {
  std::map<std::string, std::vector<TaggedTerm>> by_object;  // via tau-bar
  std::map<std::string, TaggedTerm> epsilon;  // x -> nf of x|id_FA
  // action (normal form, arrow of Delta) -> normal form, keyed by printed term
  std::map<std::pair<std::string, std::string>, TaggedTerm> action;
  bool overflow = false;
  std::size_t total = 0;
};

inline std::string term_key(const TaggedTerm& t) {
  std::string k = t.tag;
  for (const auto& a : t.path.arrows) k += "." + a;
  return k;
}

inline KanResult enumerate_kan(const MixedRewriteSystem& R,
                               const KanPresentation& pres,
                               std::size_t limit) {
  KanResult out;
  std::vector<TaggedTerm> block;
  for (const auto& x : pres.elements()) {
    TaggedTerm t{x, PathWord{pres.f_object(pres.element_object(x)), {}}};
    if (is_irreducible_term(t, R)) block.push_back(t);
  }
  std::vector<TaggedTerm> all;
  while (!block.empty()) {
    for (const auto& t : block) {
      if (out.total >= limit) {
        out.overflow = true;
        return out;
      }
      out.by_object[term_target(t, pres.delta)].push_back(t);
      all.push_back(t);
      ++out.total;
    }
    std::vector<TaggedTerm> next;
    for (const auto& t : block) {
      std::string at = term_target(t, pres.delta);
      for (const auto& b : pres.delta.arrows) {
        if (b.src != at) continue;
        TaggedTerm q{t.tag, t.path};
        q.path.arrows.push_back(b.label);
        if (is_irreducible_term(q, R)) next.push_back(q);
      }
    }
    block = std::move(next);
  }
  for (const auto& x : pres.elements()) {
    TaggedTerm t{x, PathWord{pres.f_object(pres.element_object(x)), {}}};
    out.epsilon.emplace(x, reduce_term(t, R));
  }
  for (const auto& t : all) {
    std::string at = term_target(t, pres.delta);
    for (const auto& b : pres.delta.arrows) {
      if (b.src != at) continue;
      TaggedTerm q{t.tag, t.path};
      q.path.arrows.push_back(b.label);
      out.action.emplace(std::make_pair(term_key(t), b.label),
                         reduce_term(q, R));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Special-case builders.  Each returns the KanPresentation whose completed
// census answers the named problem.

// Right cosets of the subgroup generated by `subgroup_gens` (words over the
// group's generators).  One-object Gamma with one loop per subgroup
// generator; a one-point X tagged "H".
inline KanPresentation build_coset_case(const CategoryPresentation& group,
                                        const std::vector<Word>& subgroup_gens,
                                        const std::string& tag = "H") {
  if (group.graph.objects.size() != 1)
    throw std::invalid_argument("coset builder expects a one-object group");
  const std::string& B = group.graph.objects.front();
  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta = group.graph;
  pres.relB = group.relations;
  pres.fOb["A"] = B;
  pres.xOb["A"] = {tag};
  for (std::size_t i = 0; i < subgroup_gens.size(); ++i) {
    std::string lab = "h" + std::to_string(i + 1);
    pres.arrA.push_back(Arrow{lab, "A", "A"});
    pres.fArr[lab] = PathWord{B, subgroup_gens[i]};
    pres.xArr[lab] = {tag};
  }
  validate_presentation(pres);
  return pres;
}

// Orbits of a monoid/group action: Gamma has one object and one loop per
// acting generator, Delta is trivial, X is the acted-on set.
inline KanPresentation build_orbit_case(
    const std::vector<std::string>& acting_gens,
    const std::vector<std::string>& omega,
    const std::map<std::string, std::map<std::string, std::string>>& action) {
  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta.objects = {"B"};
  pres.fOb["A"] = "B";
  pres.xOb["A"] = omega;
  for (const auto& g : acting_gens) {
    pres.arrA.push_back(Arrow{g, "A", "A"});
    pres.fArr[g] = PathWord{"B", {}};
    std::vector<std::string> row;
    for (const auto& x : omega) row.push_back(action.at(g).at(x));
    pres.xArr[g] = row;
  }
  validate_presentation(pres);
  return pres;
}

// Equivalence classes of the relation generated by `pairs` on omega: one loop
// per pair, acting by swapping in one direction and fixing everything else.
inline KanPresentation build_equivalence_case(
    const std::vector<std::string>& omega,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta.objects = {"B"};
  pres.fOb["A"] = "B";
  pres.xOb["A"] = omega;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string lab = "e" + std::to_string(i + 1);
    pres.arrA.push_back(Arrow{lab, "A", "A"});
    pres.fArr[lab] = PathWord{"B", {}};
    std::vector<std::string> row;
    for (const auto& x : omega)
      row.push_back(x == pairs[i].first ? pairs[i].second : x);
    pres.xArr[lab] = row;
  }
  validate_presentation(pres);
  return pres;
}

// Conjugacy classes of a finite group: the group acts on its own elements by
// x.g = g^-1 x g, computed through the completed system's normal forms with
// inverses replaced by positive powers.
inline KanPresentation build_conjugacy_case(const CategoryPresentation& group,
                                            const CompletionBudget& budget,
                                            std::size_t limit = 1000) {
  auto comp = complete_presentation(group, budget);
  if (!comp.complete)
    throw std::invalid_argument("conjugacy builder: completion failed");
  auto census = enumerate_elements(comp.rules, group.graph, limit);
  if (census.overflow)
    throw std::invalid_argument("conjugacy builder: group is not finite");
  const std::string& B = group.graph.objects.front();
  std::vector<Word> elems;
  for (const auto& w : census.by_hom.at({B, B})) elems.push_back(w.arrows);

  auto nf = [&](const Word& w) { return reduce_word(w, comp.rules); };
  auto order_of = [&](const std::string& g) {
    Word w;
    for (int k = 1; k <= 1000; ++k) {
      w.push_back(g);
      if (nf(w).empty()) return k;
    }
    throw std::invalid_argument("generator order not found: " + g);
  };
  auto key = [](const Word& w) {
    std::string k;
    for (const auto& s : w) k += s + ".";
    return k;
  };
  std::map<std::string, std::string> name_of;  // nf key -> element symbol
  std::vector<std::string> omega;
  for (const auto& w : elems) {
    std::string sym = w.empty() ? "1" : key(w);
    sym.erase(std::remove(sym.begin(), sym.end(), '.'), sym.end());
    if (w.empty()) sym = "1";
    name_of[key(w)] = sym;
    omega.push_back(sym);
  }

  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta.objects = {"B"};
  pres.fOb["A"] = "B";
  pres.xOb["A"] = omega;
  for (const auto& g : group.graph.arrows) {
    int ord = order_of(g.label);
    pres.arrA.push_back(Arrow{g.label, "A", "A"});
    pres.fArr[g.label] = PathWord{"B", {}};
    std::vector<std::string> row;
    for (const auto& w : elems) {
      Word conj;  // g^(ord-1) * w * g
      for (int k = 0; k < ord - 1; ++k) conj.push_back(g.label);
      conj = concat(conj, w);
      conj.push_back(g.label);
      row.push_back(name_of.at(key(nf(conj))));
    }
    pres.xArr[g.label] = row;
  }
  validate_presentation(pres);
  return pres;
}

// Colimit of a diagram of sets X over the shape Gamma: Delta is trivial, so
// the census at the single object is the colimit K(B).
inline KanPresentation build_colimit_case(
    const GraphSpec& shape,
    const std::map<std::string, std::vector<std::string>>& sets,
    const std::map<std::string, std::map<std::string, std::string>>& maps) {
  KanPresentation pres;
  pres.obA = shape.objects;
  pres.arrA = shape.arrows;
  pres.delta.objects = {"B"};
  for (const auto& ob : shape.objects) {
    pres.fOb[ob] = "B";
    pres.xOb[ob] = sets.count(ob) ? sets.at(ob) : std::vector<std::string>{};
  }
  for (const auto& a : shape.arrows) {
    pres.fArr[a.label] = PathWord{"B", {}};
    std::vector<std::string> row;
    for (const auto& x : pres.xOb[a.src]) row.push_back(maps.at(a.label).at(x));
    pres.xArr[a.label] = row;
  }
  validate_presentation(pres);
  return pres;
}

// Action of a monoid/group Delta induced along a morphism from the Gamma
// monoid (one object each); `images` sends each Gamma generator to a word in
// Delta's generators.
inline KanPresentation build_induced_action_case(
    const std::vector<std::string>& gamma_gens,
    const CategoryPresentation& target,
    const std::map<std::string, Word>& images,
    const std::vector<std::string>& omega,
    const std::map<std::string, std::map<std::string, std::string>>& action) {
  if (target.graph.objects.size() != 1)
    throw std::invalid_argument("induced-action builder expects one object");
  const std::string& B = target.graph.objects.front();
  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta = target.graph;
  pres.relB = target.relations;
  pres.fOb["A"] = B;
  pres.xOb["A"] = omega;
  for (const auto& g : gamma_gens) {
    pres.arrA.push_back(Arrow{g, "A", "A"});
    pres.fArr[g] = PathWord{B, images.at(g)};
    std::vector<std::string> row;
    for (const auto& x : omega) row.push_back(action.at(g).at(x));
    pres.xArr[g] = row;
  }
  validate_presentation(pres);
  return pres;
}

// Normal forms of a monoid: Gamma is the trivial category, X a single point.
inline KanPresentation build_monoid_normal_forms_case(
    const CategoryPresentation& monoid, const std::string& tag = "m0") {
  if (monoid.graph.objects.size() != 1)
    throw std::invalid_argument("monoid builder expects one object");
  KanPresentation pres;
  pres.obA = {"A"};
  pres.delta = monoid.graph;
  pres.relB = monoid.relations;
  pres.fOb["A"] = monoid.graph.objects.front();
  pres.xOb["A"] = {tag};
  validate_presentation(pres);
  return pres;
}

// Normal forms of a category: Gamma is the discrete graph on the objects,
// one tag per object; the census partitions hom-sets by source and target.
inline KanPresentation build_category_normal_forms_case(
    const CategoryPresentation& cat) {
  KanPresentation pres;
  pres.obA = cat.graph.objects;
  pres.delta = cat.graph;
  pres.relB = cat.relations;
  for (const auto& ob : cat.graph.objects) {
    pres.fOb[ob] = ob;
    pres.xOb[ob] = {"t_" + ob};
  }
  validate_presentation(pres);
  return pres;
}

// ---------------------------------------------------------------------------
// Iterated Kan composition: from a finite census for kan<Gamma|Delta|...> and
// functor data G: Delta -> P(Lambda), build kan<Delta|Lambda|RelC|K|G>.

struct ComposedKan {
  KanPresentation pres;
  std::map<std::string, TaggedTerm> symbol_to_term;
};

inline ComposedKan compose_kan(const KanResult& first,
                               const KanPresentation& original,
                               const GraphSpec& lambda,
                               const std::vector<PathRule>& relC,
                               const std::map<std::string, std::string>& gOb,
                               const std::map<std::string, PathWord>& gArr,
                               const MixedRewriteSystem& R) {
  if (first.overflow)
    throw std::invalid_argument("compose_kan requires a finite census");
  ComposedKan out;
  KanPresentation& pres = out.pres;
  pres.obA = original.delta.objects;
  pres.arrA = original.delta.arrows;
  pres.delta = lambda;
  pres.relB = relC;
  pres.fOb = gOb;
  pres.fArr = gArr;

  std::map<std::string, std::string> term_symbol;  // term key -> symbol
  int counter = 0;
  for (const auto& ob : pres.obA) {
    std::vector<std::string> tags;
    auto it = first.by_object.find(ob);
    if (it != first.by_object.end()) {
      for (const auto& t : it->second) {
        std::string sym = "k" + std::to_string(counter++);
        term_symbol[term_key(t)] = sym;
        out.symbol_to_term[sym] = t;
        tags.push_back(sym);
      }
    }
    pres.xOb[ob] = tags;
  }
  for (const auto& b : original.delta.arrows) {
    std::vector<std::string> row;
    auto it = first.by_object.find(b.src);
    if (it != first.by_object.end()) {
      for (const auto& t : it->second) {
        TaggedTerm q{t.tag, t.path};
        q.path.arrows.push_back(b.label);
        row.push_back(term_symbol.at(term_key(reduce_term(q, R))));
      }
    }
    pres.xArr[b.label] = row;
  }
  validate_presentation(pres);
  return out;
}

}  // namespace kanrw

#endif  // KANRW_KAN_HPP
