#ifndef KANRW_PRESENTATIONS_HPP
#define KANRW_PRESENTATIONS_HPP

// Graphs, typed path words, length-lex ordering, plain (two-sided) string
// rewriting and Knuth-Bendix completion for category and monoid presentations.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kanrw {

using Word = std::vector<std::string>;

enum class Ordering { less, equal, greater };

struct Arrow {
  std::string label;
  std::string src;
  std::string tgt;
};

struct GraphSpec {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;

  bool has_object(const std::string& ob) const {
    return std::find(objects.begin(), objects.end(), ob) != objects.end();
  }

  int arrow_index(const std::string& label) const {
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i].label == label) return static_cast<int>(i);
    return -1;
  }

  const Arrow& arrow(const std::string& label) const {
    int i = arrow_index(label);
    if (i < 0) throw std::invalid_argument("unknown arrow label: " + label);
    return arrows[static_cast<std::size_t>(i)];
  }

  void validate() const {
    for (const auto& a : arrows) {
      if (!has_object(a.src) || !has_object(a.tgt))
        throw std::invalid_argument("arrow " + a.label +
                                    " references undeclared object");
      int first = arrow_index(a.label);
      if (&arrows[static_cast<std::size_t>(first)] != &a)
        throw std::invalid_argument("duplicate arrow label: " + a.label);
    }
  }
};

// A path in the free category on a graph: a source object plus a (possibly
// empty) composable sequence of arrow labels.  The empty sequence denotes the
// identity arrow at `source`.
struct PathWord {
  std::string source;
  Word arrows;

  bool operator==(const PathWord& o) const {
    return source == o.source && arrows == o.arrows;
  }
  bool operator!=(const PathWord& o) const { return !(*this == o); }
};

inline std::string path_target(const PathWord& p, const GraphSpec& g) {
  if (p.arrows.empty()) return p.source;
  return g.arrow(p.arrows.back()).tgt;
}

inline void validate_path(const PathWord& p, const GraphSpec& g) {
  if (!g.has_object(p.source))
    throw std::invalid_argument("path source not declared: " + p.source);
  std::string at = p.source;
  for (const auto& lab : p.arrows) {
    const Arrow& a = g.arrow(lab);
    if (a.src != at)
      throw std::invalid_argument("path not composable at arrow " + lab);
    at = a.tgt;
  }
}

struct PathRule {
  PathWord lhs;
  PathWord rhs;

  bool operator==(const PathRule& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
};

struct CategoryPresentation {
  GraphSpec graph;
  std::vector<PathRule> relations;

  void validate() const {
    graph.validate();
    for (const auto& r : relations) {
      validate_path(r.lhs, graph);
      validate_path(r.rhs, graph);
      if (r.lhs.source != r.rhs.source ||
          path_target(r.lhs, graph) != path_target(r.rhs, graph))
        throw std::invalid_argument("relation sides are not parallel");
    }
  }
};

struct CompletionBudget {
  int max_rules = 10000;
  int max_passes = 100;
};

// ---------------------------------------------------------------------------
// Length-lex ordering.

inline Ordering lenlex_compare_words(const Word& p, const Word& q,
                                     const GraphSpec& g) {
  if (p.size() != q.size())
    return p.size() < q.size() ? Ordering::less : Ordering::greater;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int a = g.arrow_index(p[i]);
    int b = g.arrow_index(q[i]);
    if (a < 0) throw std::invalid_argument("unknown arrow label: " + p[i]);
    if (b < 0) throw std::invalid_argument("unknown arrow label: " + q[i]);
    if (a != b) return a < b ? Ordering::less : Ordering::greater;
  }
  return Ordering::equal;
}

inline Ordering lenlex_compare(const PathWord& p, const PathWord& q,
                               const GraphSpec& g) {
  return lenlex_compare_words(p.arrows, q.arrows, g);
}

// ---------------------------------------------------------------------------
// Word utilities shared by the rewriting passes.

inline bool matches_at(const Word& w, const Word& pat, std::size_t pos) {
  if (pos + pat.size() > w.size()) return false;
  for (std::size_t i = 0; i < pat.size(); ++i)
    if (w[pos + i] != pat[i]) return false;
  return true;
}

constexpr std::size_t word_npos = static_cast<std::size_t>(-1);

inline std::size_t find_factor(const Word& w, const Word& pat) {
  if (pat.empty() || pat.size() > w.size()) return word_npos;
  for (std::size_t pos = 0; pos + pat.size() <= w.size(); ++pos)
    if (matches_at(w, pat, pos)) return pos;
  return word_npos;
}

inline Word splice(const Word& w, std::size_t pos, std::size_t len,
                   const Word& repl) {
  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + len),
             w.end());
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline bool is_irreducible_word(const Word& w,
                                const std::vector<PathRule>& rules) {
  for (const auto& r : rules)
    if (find_factor(w, r.lhs.arrows) != word_npos) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Reduction.  Leftmost occurrence, first matching rule; repeated until no
// rule's lhs occurs as a factor.  Rules must be oriented (lhs > rhs), which
// guarantees termination under length-lex.

inline Word reduce_word(Word w, const std::vector<PathRule>& rules) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t pos = 0; pos < w.size() && !changed; ++pos) {
      for (const auto& r : rules) {
        if (matches_at(w, r.lhs.arrows, pos)) {
          w = splice(w, pos, r.lhs.arrows.size(), r.rhs.arrows);
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

inline PathWord reduce_path(const PathWord& p,
                            const std::vector<PathRule>& rules) {
  return PathWord{p.source, reduce_word(p.arrows, rules)};
}

// Rightmost-innermost variant, used only for confluence cross-checks.
inline Word reduce_word_rightmost(Word w, const std::vector<PathRule>& rules) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = w.size(); k > 0 && !changed; --k) {
      std::size_t pos = k - 1;
      for (const auto& r : rules) {
        if (matches_at(w, r.lhs.arrows, pos)) {
          w = splice(w, pos, r.lhs.arrows.size(), r.rhs.arrows);
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Critical pairs of a plain system.  Two kinds of overlap between the lhs
// lists: factor containment and proper boundary overlap.  The enumeration
// order (rule index pair, then position) is deterministic.

struct WordPair {
  Word left;
  Word right;
};

inline std::vector<WordPair> critical_pairs(const std::vector<PathRule>& rules) {
  std::vector<WordPair> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Word& li = rules[i].lhs.arrows;
    const Word& ri = rules[i].rhs.arrows;
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const Word& lj = rules[j].lhs.arrows;
      const Word& rj = rules[j].rhs.arrows;
      // containment: lj occurs inside li
      if (lj.size() <= li.size()) {
        for (std::size_t pos = 0; pos + lj.size() <= li.size(); ++pos) {
          if (i == j && lj.size() == li.size()) continue;
          if (!matches_at(li, lj, pos)) continue;
          out.push_back({ri, splice(li, pos, lj.size(), rj)});
        }
      }
      // boundary: a proper suffix of li equals a proper prefix of lj
      std::size_t maxk = std::min(li.size(), lj.size());
      for (std::size_t k = 1; k < maxk; ++k) {
        bool ok = true;
        for (std::size_t t = 0; t < k && ok; ++t)
          ok = li[li.size() - k + t] == lj[t];
        if (!ok) continue;
        Word tail(lj.begin() + static_cast<std::ptrdiff_t>(k), lj.end());
        Word head(li.begin(),
                  li.begin() + static_cast<std::ptrdiff_t>(li.size() - k));
        out.push_back({concat(ri, tail), concat(head, rj)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orientation and interreduction.

inline std::optional<PathRule> orient_rule(const PathWord& a, const PathWord& b,
                                           const GraphSpec& g) {
  switch (lenlex_compare(a, b, g)) {
    case Ordering::greater:
      return PathRule{a, b};
    case Ordering::less:
      return PathRule{b, a};
    case Ordering::equal:
      return std::nullopt;
  }
  return std::nullopt;
}

inline bool rule_less(const PathRule& a, const PathRule& b,
                      const GraphSpec& g) {
  Ordering o = lenlex_compare(a.lhs, b.lhs, g);
  if (o != Ordering::equal) return o == Ordering::less;
  o = lenlex_compare(a.rhs, b.rhs, g);
  if (o != Ordering::equal) return o == Ordering::less;
  return a.lhs.source < b.lhs.source;
}

// Interreduce: no rule's lhs or rhs stays reducible by the other rules.  The
// generated equivalence relation is unchanged.  Output sorted by lhs.
inline std::vector<PathRule> normalize_system(std::vector<PathRule> rules,
                                              const GraphSpec& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      std::vector<PathRule> others;
      others.reserve(rules.size() - 1);
      for (std::size_t j = 0; j < rules.size(); ++j)
        if (j != i) others.push_back(rules[j]);
      PathWord l = reduce_path(rules[i].lhs, others);
      PathWord r = reduce_path(rules[i].rhs, others);
      if (l == rules[i].lhs && r == rules[i].rhs) continue;
      changed = true;
      auto oriented = orient_rule(l, r, g);
      if (!oriented) {
        rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
      } else {
        rules[i] = *oriented;
      }
    }
    // drop exact duplicates
    for (std::size_t i = 0; i < rules.size(); ++i)
      for (std::size_t j = i + 1; j < rules.size(); ++j)
        if (rules[i] == rules[j]) {
          rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(j));
          --j;
          changed = true;
        }
  }
  std::sort(rules.begin(), rules.end(),
            [&](const PathRule& a, const PathRule& b) {
              return rule_less(a, b, g);
            });
  return rules;
}

// ---------------------------------------------------------------------------
// Knuth-Bendix completion.

struct CompletionResult {
  std::vector<PathRule> rules;
  bool complete = false;
  int passes = 0;
};

inline CompletionResult complete_presentation(const CategoryPresentation& pres,
                                              const CompletionBudget& budget) {
  if (budget.max_rules <= 0 || budget.max_passes <= 0)
    throw std::invalid_argument("completion budget must be positive");
  pres.validate();
  const GraphSpec& g = pres.graph;

  std::vector<PathRule> rules;
  for (const auto& rel : pres.relations) {
    auto oriented = orient_rule(rel.lhs, rel.rhs, g);
    if (oriented) rules.push_back(*oriented);
  }
  rules = normalize_system(std::move(rules), g);

  CompletionResult res;
  for (int pass = 1; pass <= budget.max_passes; ++pass) {
    res.passes = pass;
    auto pairs = critical_pairs(rules);
    bool added = false;
    for (const auto& cp : pairs) {
      Word a = reduce_word(cp.left, rules);
      Word b = reduce_word(cp.right, rules);
      if (a == b) continue;
      // recover sources: both sides of a critical pair are parallel paths;
      // derive the source from the first arrow when present
      auto src_of = [&](const Word& w, const Word& other) -> std::string {
        if (!w.empty()) return g.arrow(w.front()).src;
        if (!other.empty()) return g.arrow(other.front()).src;
        return pres.graph.objects.empty() ? std::string() : g.objects.front();
      };
      PathWord pa{src_of(a, b), a};
      PathWord pb{src_of(b, a), b};
      auto oriented = orient_rule(pa, pb, g);
      if (!oriented) continue;
      rules.push_back(*oriented);
      added = true;
      if (static_cast<int>(rules.size()) > budget.max_rules) {
        res.rules = normalize_system(std::move(rules), g);
        res.complete = false;
        return res;
      }
    }
    rules = normalize_system(std::move(rules), g);
    if (!added) {
      res.rules = std::move(rules);
      res.complete = true;
      return res;
    }
  }
  res.rules = std::move(rules);
  res.complete = false;
  return res;
}

// ---------------------------------------------------------------------------
// Enumeration of irreducible paths, stratified by length.  A prefix of an
// irreducible path is irreducible, so the search may stop as soon as a whole
// new block is reducible.

struct PathCensus {
  // normal forms grouped by (source, target)
  std::map<std::pair<std::string, std::string>, std::vector<PathWord>> by_hom;
  bool overflow = false;
  std::size_t total = 0;
};

inline PathCensus enumerate_elements(const std::vector<PathRule>& rules,
                                     const GraphSpec& g, std::size_t limit) {
  PathCensus census;
  std::vector<PathWord> block;
  for (const auto& ob : g.objects) block.push_back(PathWord{ob, {}});
  while (!block.empty()) {
    for (const auto& p : block) {
      if (census.total >= limit) {
        census.overflow = true;
        return census;
      }
      census.by_hom[{p.source, path_target(p, g)}].push_back(p);
      ++census.total;
    }
    std::vector<PathWord> next;
    for (const auto& p : block) {
      std::string at = path_target(p, g);
      for (const auto& a : g.arrows) {
        if (a.src != at) continue;
        PathWord q{p.source, p.arrows};
        q.arrows.push_back(a.label);
        if (is_irreducible_word(q.arrows, rules)) next.push_back(q);
      }
    }
    block = std::move(next);
  }
  return census;
}

}  // namespace kanrw

#endif  // KANRW_PRESENTATIONS_HPP
