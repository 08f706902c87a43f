#ifndef KANRW_NCPOLY_HPP
#define KANRW_NCPOLY_HPP

// Noncommutative polynomials over the rationals with length-lex leading
// terms: neat polynomial arithmetic, reduction with traces, S-polynomials,
// Buchberger completion, algebra dimension via the monomial acceptor, and a
// token-firing reduction machine built from a finite basis.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kanrw/automata.hpp"
#include "kanrw/presentations.hpp"

namespace kanrw {

using Rational = boost::multiprecision::cpp_rational;

// A monomial is a word over the declared generators; the empty word is 1.
struct NcTerm {
  Rational coeff;
  Word monomial;
};

struct NcPoly {
  std::vector<NcTerm> terms;
  bool neat = false;
};

// Length-lex over the declared generator order.
inline bool monomial_less(const Word& a, const Word& b,
                          const std::vector<std::string>& gens) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto rank = [&](const std::string& x) {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i] == x) return i;
    throw std::invalid_argument("undeclared generator: " + x);
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t ra = rank(a[i]), rb = rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

inline NcPoly neaten(const NcPoly& p, const std::vector<std::string>& gens) {
  std::vector<NcTerm> terms = p.terms;
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const NcTerm& s, const NcTerm& t) {
                     return monomial_less(t.monomial, s.monomial, gens);
                   });
  NcPoly out;
  out.neat = true;
  for (const auto& t : terms) {
    if (!out.terms.empty() && out.terms.back().monomial == t.monomial)
      out.terms.back().coeff += t.coeff;
    else
      out.terms.push_back(t);
    if (out.terms.back().coeff == 0) out.terms.pop_back();
  }
  return out;
}

inline bool is_zero(const NcPoly& p) { return p.terms.empty(); }

inline const NcTerm& lead_term(const NcPoly& p) {
  if (p.terms.empty()) throw std::invalid_argument("zero polynomial");
  return p.terms.front();
}

inline NcPoly poly_add(const NcPoly& p, const NcPoly& q,
                       const std::vector<std::string>& gens) {
  NcPoly sum;
  sum.terms = p.terms;
  sum.terms.insert(sum.terms.end(), q.terms.begin(), q.terms.end());
  return neaten(sum, gens);
}

inline NcPoly poly_scale(const NcPoly& p, const Rational& k) {
  NcPoly out;
  out.neat = p.neat;
  if (k == 0) return out;
  for (const auto& t : p.terms) out.terms.push_back({t.coeff * k, t.monomial});
  return out;
}

inline NcPoly poly_sub(const NcPoly& p, const NcPoly& q,
                       const std::vector<std::string>& gens) {
  return poly_add(p, poly_scale(q, -1), gens);
}

// k * u * p * v: multiplication by a term on both sides.
inline NcPoly term_mul(const Word& u, const NcPoly& p, const Word& v,
                       const Rational& k,
                       const std::vector<std::string>& gens) {
  NcPoly out;
  for (const auto& t : p.terms) {
    Word m = u;
    m.insert(m.end(), t.monomial.begin(), t.monomial.end());
    m.insert(m.end(), v.begin(), v.end());
    out.terms.push_back({t.coeff * k, m});
  }
  return neaten(out, gens);
}

inline NcPoly make_monic(const NcPoly& p) {
  if (p.terms.empty()) return p;
  return poly_scale(p, Rational(1) / p.terms.front().coeff);
}

// ---------------------------------------------------------------------------
// Reduction.  A trace step records p -> p - k * u * basis[i] * v; replaying
// the steps recovers p - reduce(p) as an explicit member of the ideal.

struct ReduceStep {
  Rational coeff;
  Word left;
  std::size_t basis_index;
  Word right;
};
using ReduceTrace = std::vector<ReduceStep>;

inline std::optional<std::size_t> find_subword(const Word& w, const Word& f) {
  if (f.empty() || f.size() > w.size()) return std::nullopt;
  for (std::size_t i = 0; i + f.size() <= w.size(); ++i)
    if (std::equal(f.begin(), f.end(), w.begin() + i)) return i;
  return std::nullopt;
}

inline NcPoly reduce_poly(const NcPoly& p, const std::vector<NcPoly>& basis,
                          const std::vector<std::string>& gens,
                          ReduceTrace* trace = nullptr) {
  NcPoly cur = neaten(p, gens);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : cur.terms) {
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].terms.empty()) continue;
        auto pos = find_subword(t.monomial, basis[i].terms.front().monomial);
        if (!pos) continue;
        Word u(t.monomial.begin(), t.monomial.begin() + *pos);
        Word v(t.monomial.begin() + *pos +
                   basis[i].terms.front().monomial.size(),
               t.monomial.end());
        Rational k = t.coeff / basis[i].terms.front().coeff;
        cur = poly_sub(cur, term_mul(u, basis[i], v, k, gens), gens);
        if (trace) trace->push_back({k, u, i, v});
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return cur;
}

// Same normal form, but choosing the reducible term, basis element, and
// occurrence at random — used to check confluence of a completed basis.
inline NcPoly reduce_poly_random(const NcPoly& p,
                                 const std::vector<NcPoly>& basis,
                                 const std::vector<std::string>& gens,
                                 std::mt19937& rng) {
  NcPoly cur = neaten(p, gens);
  while (true) {
    // collect every (term, basis element, occurrence) triple
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> moves;
    for (std::size_t ti = 0; ti < cur.terms.size(); ++ti)
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].terms.empty()) continue;
        const Word& f = basis[i].terms.front().monomial;
        const Word& w = cur.terms[ti].monomial;
        if (f.empty() || f.size() > w.size()) continue;
        for (std::size_t pos = 0; pos + f.size() <= w.size(); ++pos)
          if (std::equal(f.begin(), f.end(), w.begin() + pos))
            moves.push_back({ti, i, pos});
      }
    if (moves.empty()) return cur;
    auto [ti, i, pos] = moves[rng() % moves.size()];
    const NcTerm& t = cur.terms[ti];
    Word u(t.monomial.begin(), t.monomial.begin() + pos);
    Word v(t.monomial.begin() + pos + basis[i].terms.front().monomial.size(),
           t.monomial.end());
    Rational k = t.coeff / basis[i].terms.front().coeff;
    cur = poly_sub(cur, term_mul(u, basis[i], v, k, gens), gens);
  }
}

// ---------------------------------------------------------------------------
// S-polynomials.  One per proper overlap (length >= 1) of the leading
// monomials: factor containment and matched boundaries, including the
// self-overlaps of a monomial with itself.

inline std::vector<NcPoly> s_polynomials(const NcPoly& p, const NcPoly& q,
                                         const std::vector<std::string>& gens) {
  std::vector<NcPoly> out;
  if (p.terms.empty() || q.terms.empty()) return out;
  const Word& l1 = p.terms.front().monomial;
  const Word& l2 = q.terms.front().monomial;
  bool same = l1 == l2;
  auto emit = [&](const NcPoly& s) {
    NcPoly n = neaten(s, gens);
    if (!is_zero(n)) out.push_back(n);
  };
  // l2 inside l1 (and, for distinct pairs, l1 inside l2)
  for (std::size_t i = 0; i + l2.size() <= l1.size(); ++i) {
    if (same && l1.size() == l2.size()) break;  // identical: no containment
    if (!std::equal(l2.begin(), l2.end(), l1.begin() + i)) continue;
    Word u(l1.begin(), l1.begin() + i);
    Word v(l1.begin() + i + l2.size(), l1.end());
    emit(poly_sub(p, term_mul(u, q, v, 1, gens), gens));
  }
  if (!same)
    for (std::size_t i = 0; i + l1.size() <= l2.size(); ++i) {
      if (!std::equal(l1.begin(), l1.end(), l2.begin() + i)) continue;
      Word u(l2.begin(), l2.begin() + i);
      Word v(l2.begin() + i + l1.size(), l2.end());
      emit(poly_sub(q, term_mul(u, p, v, 1, gens), gens));
    }
  // boundary overlaps: proper suffix of l1 = proper prefix of l2
  auto boundary = [&](const NcPoly& a, const Word& la, const NcPoly& b,
                      const Word& lb) {
    for (std::size_t k = 1; k < la.size() && k < lb.size(); ++k) {
      if (!std::equal(la.end() - k, la.end(), lb.begin())) continue;
      Word v(lb.begin() + k, lb.end());        // la * v = u * lb
      Word u(la.begin(), la.end() - k);
      NcPoly left = term_mul({}, a, v, 1, gens);
      NcPoly right = term_mul(u, b, {}, 1, gens);
      emit(poly_sub(left, right, gens));
    }
  };
  boundary(p, l1, q, l2);
  if (!same) boundary(q, l2, p, l1);
  return out;
}

// ---------------------------------------------------------------------------
// Buchberger completion with one interreduction per pass.

struct GrobnerBasis {
  std::vector<std::string> gens;
  std::vector<NcPoly> polys;  // monic, neat
};

struct GrobnerResult {
  GrobnerBasis basis;
  bool complete = false;
};

inline std::vector<NcPoly> interreduce(std::vector<NcPoly> polys,
                                       const std::vector<std::string>& gens) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      std::vector<NcPoly> others;
      for (std::size_t j = 0; j < polys.size(); ++j)
        if (j != i) others.push_back(polys[j]);
      NcPoly r = reduce_poly(polys[i], others, gens);
      if (is_zero(r)) {
        polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      r = make_monic(r);
      if (!(r.terms == polys[i].terms)) {
        polys[i] = r;
        changed = true;
      }
    }
  }
  return polys;
}

inline bool operator==(const NcTerm& a, const NcTerm& b) {
  return a.coeff == b.coeff && a.monomial == b.monomial;
}

inline GrobnerResult buchberger(const std::vector<NcPoly>& input,
                                const std::vector<std::string>& gens,
                                const CompletionBudget& budget = {}) {
  GrobnerResult res;
  res.basis.gens = gens;
  std::vector<NcPoly> polys;
  for (const auto& p : input) {
    NcPoly n = neaten(p, gens);
    if (!is_zero(n)) polys.push_back(make_monic(n));
  }
  polys = interreduce(std::move(polys), gens);
  for (int pass = 0; pass < budget.max_passes; ++pass) {
    std::vector<NcPoly> fresh;
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (std::size_t j = i; j < polys.size(); ++j)
        for (const auto& s : s_polynomials(polys[i], polys[j], gens)) {
          NcPoly r = reduce_poly(s, polys, gens);
          if (!is_zero(r)) {
            r = reduce_poly(r, fresh, gens);
            if (!is_zero(r)) fresh.push_back(make_monic(r));
          }
        }
    if (fresh.empty()) {
      res.basis.polys = std::move(polys);
      res.complete = true;
      return res;
    }
    polys.insert(polys.end(), fresh.begin(), fresh.end());
    polys = interreduce(std::move(polys), gens);
    if (static_cast<int>(polys.size()) > budget.max_rules) break;
  }
  res.basis.polys = std::move(polys);
  res.complete = false;
  return res;
}

// ---------------------------------------------------------------------------
// Dimension of the quotient algebra = number of irreducible monomials,
// computed from the monomial acceptor; infinite when the acceptor's live
// part has a cycle, in which case the regular expression is the answer.

struct DimensionResult {
  bool infinite = false;
  std::size_t dimension = 0;      // valid when finite
  std::vector<Word> monomials;    // irreducible monomials, shortlex
  RegexPtr language;              // always set
};

inline DimensionResult algebra_dimension(const GrobnerBasis& basis,
                                         std::size_t bound = 10000) {
  std::vector<Word> lms;
  for (const auto& p : basis.polys)
    lms.push_back(p.terms.front().monomial);
  auto [dfa, regex] = build_monomial_acceptor(lms, basis.gens);
  DimensionResult out;
  out.language = regex;

  // live = reachable and co-reachable states
  std::size_t n = dfa.states.size();
  std::vector<char> reach(n, 0), co(n, 0);
  reach[static_cast<std::size_t>(dfa.initial)] = 1;
  for (int t : dfa.terminal) co[static_cast<std::size_t>(t)] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [key, to] : dfa.transition) {
      auto s = static_cast<std::size_t>(key.first);
      auto d = static_cast<std::size_t>(to);
      if (reach[s] && !reach[d]) reach[d] = grew = true;
      if (co[d] && !co[s]) co[s] = grew = true;
    }
  }
  auto live = [&](int s) {
    return reach[static_cast<std::size_t>(s)] && co[static_cast<std::size_t>(s)];
  };
  // a cycle within the live part makes the language infinite; the number of
  // live states bounds the length of every accepted word otherwise
  std::vector<int> colour(n, 0);
  std::vector<int> stack;
  bool cyclic = false;
  std::function<void(int)> dfs = [&](int s) {
    colour[static_cast<std::size_t>(s)] = 1;
    for (std::size_t li = 0; li < dfa.alphabet.size(); ++li) {
      auto it = dfa.transition.find({s, static_cast<int>(li)});
      if (it == dfa.transition.end() || !live(it->second)) continue;
      int d = it->second;
      if (colour[static_cast<std::size_t>(d)] == 1) cyclic = true;
      if (colour[static_cast<std::size_t>(d)] == 0) dfs(d);
    }
    colour[static_cast<std::size_t>(s)] = 2;
  };
  if (live(dfa.initial)) dfs(dfa.initial);
  if (cyclic) {
    out.infinite = true;
    return out;
  }
  // finite: enumerate accepted words breadth-first
  std::vector<std::pair<int, Word>> block{{dfa.initial, {}}};
  while (!block.empty() && out.monomials.size() <= bound) {
    std::vector<std::pair<int, Word>> next;
    for (const auto& [s, w] : block) {
      if (dfa.terminal.count(s)) out.monomials.push_back(w);
      for (std::size_t li = 0; li < dfa.alphabet.size(); ++li) {
        auto it = dfa.transition.find({s, static_cast<int>(li)});
        if (it == dfa.transition.end() || !live(it->second)) continue;
        Word wx = w;
        wx.push_back(dfa.alphabet[li]);
        next.push_back({it->second, wx});
      }
    }
    block = std::move(next);
  }
  out.dimension = out.monomials.size();
  return out;
}

// ---------------------------------------------------------------------------
// The reduction machine of a finite-dimensional basis: one vertex per
// irreducible monomial, and an edge (coefficient, letter) from m to m' for
// each term c*m' of the normal form of m*letter.  Tokens carry a coefficient
// and an unread suffix; firing a token in any order terminates with the same
// final marking, which is the normal form.

struct GrobnerMachineEdge {
  std::size_t src;
  std::string letter;
  Rational coeff;
  std::size_t tgt;
};

struct GrobnerMachine {
  std::vector<std::string> gens;
  std::vector<Word> vertices;  // irreducible monomials; vertex 0 = id
  std::vector<GrobnerMachineEdge> edges;
  std::map<Word, std::size_t> index;
};

inline GrobnerMachine build_grobner_machine(const GrobnerBasis& basis,
                                            std::size_t bound = 10000) {
  DimensionResult dim = algebra_dimension(basis, bound);
  if (dim.infinite)
    throw std::invalid_argument(
        "reduction machine requires a finite-dimensional algebra");
  GrobnerMachine m;
  m.gens = basis.gens;
  m.vertices = dim.monomials;
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    m.index[m.vertices[i]] = i;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    for (const auto& x : basis.gens) {
      NcPoly p;
      Word w = m.vertices[v];
      w.push_back(x);
      p.terms.push_back({1, w});
      for (const auto& t : reduce_poly(p, basis.polys, basis.gens).terms)
        m.edges.push_back({v, x, t.coeff, m.index.at(t.monomial)});
    }
  return m;
}

// Fires tokens in the order chosen by `pick` (index into the pending list);
// the final marking is returned as a neat polynomial over the vertex labels.
inline NcPoly run_grobner_machine(
    const GrobnerMachine& m, const Word& input,
    const std::function<std::size_t(std::size_t)>& pick) {
  struct Token {
    Rational coeff;
    std::size_t vertex;
    Word suffix;
  };
  std::vector<Token> pending{{1, 0, input}};
  std::vector<Rational> marking(m.vertices.size(), 0);
  while (!pending.empty()) {
    std::size_t k = pick(pending.size());
    Token tok = pending[k];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(k));
    if (tok.suffix.empty()) {
      marking[tok.vertex] += tok.coeff;
      continue;
    }
    std::string x = tok.suffix.front();
    Word rest(tok.suffix.begin() + 1, tok.suffix.end());
    for (const auto& e : m.edges)
      if (e.src == tok.vertex && e.letter == x)
        pending.push_back({tok.coeff * e.coeff, e.tgt, rest});
  }
  NcPoly out;
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (marking[v] != 0) out.terms.push_back({marking[v], m.vertices[v]});
  return neaten(out, m.gens);
}

// ---------------------------------------------------------------------------
// Text form: terms `k m` joined by + and -, k a rational `p/q` (optional),
// m generator names joined by `*`, e.g. "e1*e2*e1 - 2/9 e1*e2 + 2".

inline NcPoly parse_nc_poly(const std::string& text,
                            const std::vector<std::string>& gens) {
  NcPoly out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  bool first = true;
  while (i < text.size()) {
    Rational sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw std::invalid_argument("expected + or - in polynomial: " + text);
    }
    first = false;
    Rational coeff = 1;
    bool have_coeff = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) ||
              text[j] == '/'))
        ++j;
      coeff = Rational(text.substr(i, j - i));
      have_coeff = true;
      i = j;
      skip_ws();
    }
    Word mono;
    if (i < text.size() && text[i] != '+' && text[i] != '-') {
      std::size_t j = i;
      while (j < text.size() && text[j] != '+' && text[j] != '-' &&
             !std::isspace(static_cast<unsigned char>(text[j])))
        ++j;
      std::string chunk = text.substr(i, j - i);
      i = j;
      std::size_t start = 0;
      while (start <= chunk.size()) {
        std::size_t star = chunk.find('*', start);
        std::string name = chunk.substr(
            start, star == std::string::npos ? std::string::npos
                                             : star - start);
        if (!name.empty()) mono.push_back(name);
        if (star == std::string::npos) break;
        start = star + 1;
      }
      for (const auto& x : mono)
        if (std::find(gens.begin(), gens.end(), x) == gens.end())
          throw std::invalid_argument("undeclared generator: " + x);
      skip_ws();
    }
    if (mono.empty() && !have_coeff)
      throw std::invalid_argument("empty term in polynomial: " + text);
    out.terms.push_back({sign * coeff, mono});
  }
  return neaten(out, gens);
}

inline std::string nc_poly_to_string(const NcPoly& p) {
  if (p.terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    Rational c = p.terms[i].coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (i == 0)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    std::string num = c.str();
    const Word& m = p.terms[i].monomial;
    if (m.empty()) {
      s += num;
    } else {
      if (num != "1") s += num + " ";
      for (std::size_t k = 0; k < m.size(); ++k)
        s += (k ? "*" : "") + m[k];
    }
  }
  return s;
}

}  // namespace kanrw

#endif  // KANRW_NCPOLY_HPP
