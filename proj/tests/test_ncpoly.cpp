#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "golden_data.hpp"
#include "kanrw/ncpoly.hpp"

using namespace kanrw;
using golden::W;

namespace {

const std::vector<std::string> E = {"e1", "e2"};
const std::vector<std::string> AB = {"a", "b"};

NcPoly P(const std::string& text, const std::vector<std::string>& gens) {
  return parse_nc_poly(text, gens);
}

std::vector<NcPoly> hecke() {
  return {P("e1*e1 - e1", E), P("e2*e2 - e2", E),
          P("e2*e1*e2 - e1*e2*e1 + 2/9 e2 - 2/9 e1", E)};
}

bool same_poly(const NcPoly& a, const NcPoly& b,
               const std::vector<std::string>& gens) {
  return is_zero(poly_sub(a, b, gens));
}

NcPoly random_poly(std::mt19937& rng, const std::vector<std::string>& gens,
                   std::size_t max_deg, std::size_t max_terms) {
  NcPoly p;
  std::size_t nterms = 1 + rng() % max_terms;
  for (std::size_t t = 0; t < nterms; ++t) {
    Word m;
    std::size_t len = rng() % (max_deg + 1);
    for (std::size_t i = 0; i < len; ++i) m.push_back(gens[rng() % gens.size()]);
    auto num = static_cast<int>(rng() % 19) - 9;
    auto den = static_cast<int>(1 + rng() % 9);
    p.terms.push_back({Rational(num, den), m});
  }
  return neaten(p, gens);
}

NcPoly eval_trace(const NcPoly& p, const ReduceTrace& trace,
                  const std::vector<NcPoly>& basis,
                  const std::vector<std::string>& gens) {
  NcPoly acc = p;
  for (const auto& step : trace)
    acc = poly_sub(
        acc, term_mul(step.left, basis[step.basis_index], step.right,
                      step.coeff, gens),
        gens);
  return acc;
}

}  // namespace

TEST_CASE("neaten") {
  NcPoly p;
  p.terms = {{2, W("a")}, {3, W("a")}};
  auto n = neaten(p, AB);
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].coeff == 5);

  NcPoly q;
  q.terms = {{1, W("a")}, {-1, W("a")}};
  CHECK(is_zero(neaten(q, AB)));

  NcPoly r;
  r.terms = {{1, W("b")}, {1, W("a a")}};
  auto nr = neaten(r, AB);
  REQUIRE(nr.terms.size() == 2);
  CHECK(nr.terms[0].monomial == W("a a"));
  CHECK(nr.terms[1].monomial == W("b"));
}

TEST_CASE("polynomial arithmetic") {
  auto s = poly_add(P("a + b", AB), P("a - b", AB), AB);
  REQUIRE(s.terms.size() == 1);
  CHECK(s.terms[0].coeff == 2);
  CHECK(s.terms[0].monomial == W("a"));

  auto p = P("2 a*b - 1/3 b + 4", AB);
  CHECK(is_zero(poly_sub(p, p, AB)));

  SECTION("term multiplication matches monomial concatenation") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      NcPoly q = random_poly(rng, AB, 3, 4);
      Word u, v, w;
      for (int i = 0; i < 2; ++i) {
        u.push_back(AB[rng() % 2]);
        v.push_back(AB[rng() % 2]);
        w.push_back(AB[rng() % 2]);
      }
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      CHECK(same_poly(term_mul(u, term_mul(v, q, {}, 1, AB), w, 1, AB),
                      term_mul(uv, q, w, 1, AB), AB));
    }
  }

  SECTION("parser round trip") {
    auto h = P("e1*e2*e1 - 2/9 e1*e2", E);
    CHECK(nc_poly_to_string(h) == "e1*e2*e1 - 2/9 e1*e2");
    CHECK(nc_poly_to_string(P("0 a + 0", AB)) == "0");
    CHECK_THROWS_AS(P("a + z", AB), std::invalid_argument);
  }
}

TEST_CASE("reduction over the Hecke basis") {
  auto basis = hecke();
  auto long_word = P("e1*e2*e1*e2*e1", E);
  auto nf = reduce_poly(long_word, basis, E);
  CHECK(same_poly(nf, P("7/9 e1*e2*e1 + 2/9 e1", E), E));

  auto nf2 = reduce_poly(P("e1*e2*e1*e2", E), basis, E);
  CHECK(same_poly(nf2, P("e1*e2*e1 - 2/9 e1*e2 + 2/9 e1", E), E));

  auto irr = P("5 e1*e2 - e2*e1 + 3", E);
  CHECK(same_poly(reduce_poly(irr, basis, E), irr, E));

  SECTION("the reduction trace witnesses ideal membership") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      NcPoly p = random_poly(rng, E, 6, 4);
      ReduceTrace trace;
      NcPoly r = reduce_poly(p, basis, E, &trace);
      CHECK(same_poly(eval_trace(p, trace, basis, E), r, E));
    }
  }

  SECTION("random reduction strategies agree on 200 polynomials") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      NcPoly p = random_poly(rng, E, 6, 4);
      NcPoly a = reduce_poly(p, basis, E);
      NcPoly b = reduce_poly_random(p, basis, E, rng);
      CHECK(same_poly(a, b, E));
    }
  }
}

TEST_CASE("S-polynomials") {
  auto p = P("a*a*a - b", AB);
  auto self = s_polynomials(p, p, AB);
  // suffix/prefix matches of aaa with itself at lengths 1 and 2
  REQUIRE(self.size() == 2);
  // p*aa - aa*p and p*a - a*p: the commutators of b with aa and a
  CHECK(same_poly(self[0], P("a*a*b - b*a*a", AB), AB));
  CHECK(same_poly(self[1], P("a*b - b*a", AB), AB));
  auto closed = buchberger({p}, AB);
  REQUIRE(closed.complete);
  for (const auto& s : self)
    CHECK(is_zero(reduce_poly(s, closed.basis.polys, AB)));

  CHECK(s_polynomials(P("a*a - a", AB), P("b*b - b", AB), AB).empty());

  auto h = hecke();
  auto pair = s_polynomials(h[1], h[2], E);  // e2^2 against e2e1e2
  CHECK(pair.size() == 2);

  SECTION("multiplication on either side preserves the order") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      Word a, b, u, v;
      for (std::size_t i = 0; i < 1 + rng() % 3; ++i) a.push_back(AB[rng() % 2]);
      for (std::size_t i = 0; i < 1 + rng() % 3; ++i) b.push_back(AB[rng() % 2]);
      for (std::size_t i = 0; i < rng() % 3; ++i) u.push_back(AB[rng() % 2]);
      for (std::size_t i = 0; i < rng() % 3; ++i) v.push_back(AB[rng() % 2]);
      if (!monomial_less(a, b, AB)) continue;
      auto wrap = [&](const Word& m) {
        Word w = u;
        w.insert(w.end(), m.begin(), m.end());
        w.insert(w.end(), v.begin(), v.end());
        return w;
      };
      CHECK(monomial_less(wrap(a), wrap(b), AB));
    }
  }
}

TEST_CASE("Buchberger completion") {
  SECTION("the Hecke set is already a basis") {
    auto res = buchberger(hecke(), E);
    REQUIRE(res.complete);
    REQUIRE(res.basis.polys.size() == 3);
    for (const auto& p : hecke()) {
      bool found = false;
      for (const auto& q : res.basis.polys)
        if (same_poly(p, q, E)) found = true;
      CHECK(found);
    }
    SECTION("all S-polynomials of the output reduce to zero") {
      const auto& B = res.basis.polys;
      for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = i; j < B.size(); ++j)
          for (const auto& s : s_polynomials(B[i], B[j], E))
            CHECK(is_zero(reduce_poly(s, B, E)));
    }
  }

  SECTION("linear chain") {
    // later-declared generators are larger, so this declares a > b > c
    std::vector<std::string> abc = {"c", "b", "a"};
    auto res = buchberger({P("a - b", abc), P("b - c", abc)}, abc);
    REQUIRE(res.complete);
    REQUIRE(res.basis.polys.size() == 2);
    CHECK(same_poly(res.basis.polys[0], P("a - c", abc), abc));
    CHECK(same_poly(res.basis.polys[1], P("b - c", abc), abc));
  }

  SECTION("empty input") {
    auto res = buchberger({}, AB);
    REQUIRE(res.complete);
    CHECK(res.basis.polys.empty());
  }
}

TEST_CASE("algebra dimension") {
  SECTION("the Hecke algebra has dimension six") {
    auto res = buchberger(hecke(), E);
    res.basis.gens = E;
    auto dim = algebra_dimension(res.basis);
    REQUIRE_FALSE(dim.infinite);
    CHECK(dim.dimension == 6);
    std::set<Word> got(dim.monomials.begin(), dim.monomials.end());
    std::set<Word> expected = {W(""),      W("e1"),    W("e2"),
                               W("e1 e2"), W("e2 e1"), W("e1 e2 e1")};
    CHECK(got == expected);
  }

  SECTION("an infinite algebra yields a regular expression") {
    GrobnerBasis basis;
    basis.gens = AB;
    basis.polys = {P("a*a*a - b + 2", AB), P("b*a*a*b - 2 b*b + 4 a", AB)};
    auto dim = algebra_dimension(basis);
    REQUIRE(dim.infinite);
    // accepted monomials are exactly the words avoiding both leading
    // monomials as factors
    for (const auto& w : words_upto(AB, 8)) {
      bool has = find_factor(w, W("a a a")) != word_npos ||
                 find_factor(w, W("b a a b")) != word_npos;
      CHECK(regex_membership(dim.language, w) == !has);
    }
    // closed form for the nonempty part of the language
    auto a = rx_letter("a"), b = rx_letter("b");
    auto aa = rx_cat({a, a});
    auto closed = rx_alt(
        {rx_cat({rx_alt({rx_cat({aa, b}), rx_cat({a, b}), b}),
                 rx_star(rx_alt({rx_cat({a, b}), b})),
                 rx_alt({aa, a, rx_id()})}),
         rx_alt({aa, a})});
    for (const auto& w : words_upto(AB, 8)) {
      if (w.empty()) continue;
      CHECK(regex_membership(dim.language, w) ==
            regex_membership(closed, w));
    }
  }

  SECTION("collapsing a generator") {
    GrobnerBasis basis;
    basis.gens = {"a"};
    basis.polys = {P("a", {"a"})};
    auto dim = algebra_dimension(basis);
    REQUIRE_FALSE(dim.infinite);
    CHECK(dim.dimension == 1);
    CHECK(dim.monomials == std::vector<Word>{{}});
  }
}

TEST_CASE("reduction machine") {
  auto res = buchberger(hecke(), E);
  auto machine = build_grobner_machine(res.basis);
  CHECK(machine.vertices.size() == 6);
  CHECK(machine.index.at(W("")) == 0);

  SECTION("letter fan-out matches the basis") {
    // e1e2e1 * e2 reduces to a three-term polynomial, so three edges
    std::size_t fan = 0;
    for (const auto& e : machine.edges)
      if (e.src == machine.index.at(W("e1 e2 e1")) && e.letter == "e2") ++fan;
    CHECK(fan == 3);
  }

  SECTION("random firing orders reach the reduced form") {
    std::mt19937 rng(47);
    auto random_pick = [&](std::size_t n) { return rng() % n; };
    auto out = run_grobner_machine(machine, W("e1 e2 e1 e2 e1"), random_pick);
    CHECK(same_poly(out, P("7/9 e1*e2*e1 + 2/9 e1", E), E));
    for (int trial = 0; trial < 100; ++trial) {
      Word w;
      std::size_t len = rng() % 7;
      for (std::size_t i = 0; i < len; ++i) w.push_back(E[rng() % 2]);
      NcPoly mono;
      mono.terms.push_back({1, w});
      CHECK(same_poly(run_grobner_machine(machine, w, random_pick),
                      reduce_poly(mono, res.basis.polys, E), E));
    }
  }

  SECTION("infinite algebras are rejected") {
    GrobnerBasis basis;
    basis.gens = AB;
    basis.polys = {P("a*a*a - b", AB)};
    CHECK_THROWS_AS(build_grobner_machine(basis), std::invalid_argument);
  }
}
