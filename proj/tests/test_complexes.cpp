#include "afnd/complexes.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace afnd;

namespace {

const FieldSpec Q5 = FieldSpec::padic(5);
const NormValue ONE = NormValue::one();

struct Disc {
  PolyradiusPtr amb = make_polyradius({{"x", ONE}});
  AlgebraPtr A = AffinoidPresentation::make(Q5, amb);
  TateElement x = TateElement::variable(amb, "x");
};

// 0 -> A -> A -> ... with the given multipliers, all over one algebra.
ChainComplex chain(const AlgebraPtr& a, const std::vector<TateElement>& mult, int first = 0) {
  ChainComplex c;
  c.first_degree = first;
  for (std::size_t i = 0; i <= mult.size(); ++i) c.levels.push_back({a});
  for (const auto& m : mult) c.differentials.push_back({DifferentialEntry{0, 0, std::nullopt, m}});
  return c;
}

AlgebraPtr free_xT(const NormValue& s = ONE) {
  return AffinoidPresentation::make(Q5, make_polyradius({{"x", ONE}, {"T", s}}));
}

}  // namespace

TEST_SUITE("complexes") {
  TEST_CASE("koszul complexes of single relators") {
    auto B = free_xT();
    const auto& amb = B->ambient();
    for (const char* rel : {"T - x^2", "x*T - 1", "T"}) {
      auto k = koszul(B, {parse_element(amb, rel)}, 8);
      CHECK(k.first_degree == -1);
      CHECK(k.levels.size() == 2);
      CHECK(homology(k, -1, 8).is_zero);
    }
    // T - 0 has cokernel A: one class per power of x
    auto k = koszul(B, {parse_element(amb, "T")}, 6);
    auto h0 = homology(k, 0, 6);
    CHECK_FALSE(h0.is_zero);
    CHECK(h0.rank == 7);
    // Truncated H^0 counts degree <= D monomials in x, T modulo f * (degree
    // <= D - deg f): for deg f = 2 that is (D+1)(D+2)/2 - (D-1)D/2 = 2D + 1.
    auto w = koszul(B, {parse_element(amb, "T - x^2")}, 6);
    CHECK(homology(w, 0, 6).rank == 13);
  }

  TEST_CASE("koszul over a multi-relator set") {
    auto B = AffinoidPresentation::make(
        Q5, make_polyradius({{"x", ONE}, {"T", ONE}, {"S", ONE}, {"U", ONE}}));
    const auto& amb = B->ambient();
    auto k = koszul(B, {parse_element(amb, "T - x"), parse_element(amb, "x*S - 1"), parse_element(amb, "U - x^2")}, 4);
    CHECK(k.first_degree == -3);
    CHECK(k.levels[0].size() == 1);
    CHECK(k.levels[1].size() == 3);
    CHECK(k.levels[2].size() == 3);
    CHECK(k.levels[3].size() == 1);
    CHECK_FALSE(find_d_squared_failure(k, 4));
  }

  TEST_CASE("resolutions and derived tensor products") {
    Disc d;
    auto W = weierstrass(d.A, {d.x}, {ONE});
    auto res = resolution(W, 6);
    CHECK(res.levels.size() == 2);
    CHECK_FALSE(find_d_squared_failure(res, 6));
    // M = A returns the resolution itself, entrywise
    auto same = derived_tensor(identity_extension(d.A), W, 6);
    REQUIRE(same.differentials.size() == res.differentials.size());
    for (std::size_t i = 0; i < res.differentials.size(); ++i) {
      REQUIRE(same.differentials[i].size() == res.differentials[i].size());
      for (std::size_t j = 0; j < res.differentials[i].size(); ++j)
        CHECK(same.differentials[i][j].multiplier.str() == res.differentials[i][j].multiplier.str());
    }
    CHECK(same.levels.back().front()->str() == res.levels.back().front()->str());

    // M = A/(x), res = koszul(T - x): [k{T} -> k{T}] multiplication by T
    auto k = quotient(d.A, {d.x});
    auto dt = derived_tensor(k, W, 6);
    const auto& top = dt.levels.back().front();
    auto m = top->normal_form(dt.differentials[0][0].multiplier, 6);
    CHECK(m == TateElement::variable(top->ambient(), "T"));
    CHECK(homology(dt, -1, 6).is_zero);

    // M = A/(x), res = koszul(xS - 1): multiplication by -1, exact
    auto L = laurent(d.A, {}, {}, {d.x}, std::vector<NormValue>{ONE});
    auto dl = derived_tensor(k, L, 6);
    const auto& tl = dl.levels.back().front();
    CHECK(tl->normal_form(dl.differentials[0][0].multiplier, 6) == TateElement::constant(tl->ambient(), -1));
    CHECK(homology(dl, -1, 6).is_zero);
    CHECK(homology(dl, 0, 6).is_zero);
  }

  TEST_CASE("homology examples") {
    Disc d;
    auto kfield = quotient(d.A, {d.x}).target();
    auto zero = chain(kfield, {TateElement(kfield->ambient())}, -1);
    auto h = homology(zero, -1, 4);
    CHECK_FALSE(h.is_zero);
    CHECK(h.rank == 1);
    REQUIRE(h.generators.size() == 1);
    CHECK(format_cochain(h.generators[0]) == "1");

    auto id = chain(d.A, {TateElement::constant(d.amb, 1)});
    CHECK(homology(id, 0, 5).is_zero);
    CHECK(homology(id, 1, 5).is_zero);

    auto B = free_xT();
    for (unsigned D : {2u, 4u, 6u, 8u}) CHECK(homology(koszul(B, {parse_element(B->ambient(), "T - x^2")}, D), -1, D).is_zero);
  }

  TEST_CASE("strict exactness examples") {
    Disc d;
    auto id = strict_exactness(chain(d.A, {TateElement::constant(d.amb, 1)}), 6);
    CHECK(id.exact);
    for (const auto& l : id.levels) CHECK(l.constant == ONE);

    // 0 -> A -x-> A -> A/(x) -> 0
    auto Q = quotient(d.A, {d.x});
    ChainComplex c;
    c.levels = {{d.A}, {d.A}, {Q.target()}};
    c.differentials = {{DifferentialEntry{0, 0, std::nullopt, d.x}},
                       {DifferentialEntry{0, 0, Q.map, TateElement::constant(Q.target()->ambient(), 1)}}};
    CHECK_FALSE(find_d_squared_failure(c, 6));
    auto w = strict_exactness(c, 6);
    CHECK(w.exact);
    REQUIRE(w.levels.size() == 3);
    for (const auto& l : w.levels) {
      CHECK(l.exact);
      CHECK(l.constant == ONE);
    }

    auto z = strict_exactness(chain(d.A, {TateElement(d.amb)}), 4);
    CHECK_FALSE(z.exact);
    REQUIRE(z.levels.size() == 2);
    for (const auto& l : z.levels) {
      CHECK_FALSE(l.exact);
      REQUIRE(l.counterexample);
      CHECK(format_cochain(*l.counterexample) == "1");
    }
  }

  TEST_CASE("strict mono constant of multiplication by 5") {
    Disc d;
    auto w = strict_exactness(chain(d.A, {TateElement::constant(d.amb, 5)}), 4);
    REQUIRE(w.levels.size() == 2);
    CHECK(w.levels[0].exact);
    CHECK(w.levels[0].constant == NormValue::prime_power(5, 1));
    // A / 5A = 0 over a field: exact with preimage constant 5
    CHECK(w.levels[1].exact);
    CHECK(w.levels[1].constant == NormValue::prime_power(5, 1));
  }

  TEST_CASE("preimages and cochain norms") {
    Disc d;
    auto c = chain(d.A, {d.x});
    auto pre = min_norm_preimage(c, 1, {parse_element(d.amb, "x^3 + 5*x")}, 5);
    REQUIRE(pre);
    CHECK((*pre)[0] == parse_element(d.amb, "x^2 + 5"));
    CHECK_FALSE(min_norm_preimage(c, 1, {TateElement::constant(d.amb, 1)}, 5));
    CHECK(cochain_norm(c, 1, {parse_element(d.amb, "x/5 + 1")}, 5) == NormValue::prime_power(5, 1));
  }

  TEST_CASE("koszul injectivity for random f") {
    oracle::Rng rng(41);
    auto B = free_xT();
    for (int i = 0; i < 5; ++i) {
      auto f = oracle::random_poly(rng, 1, 3, 3);
      TateElement fx(B->ambient());
      for (const auto& [e, c] : f.terms) fx.add_term({e[0], 0}, c);
      auto k = koszul(B, {TateElement::variable(B->ambient(), "T") - fx}, 8);
      CHECK(homology(k, -1, 8).is_zero);
      CHECK_FALSE(find_d_squared_failure(k, 8));
    }
  }

  TEST_CASE("nonzero homology persists at higher truncation") {
    Disc d;
    auto Q = quotient(d.A, {d.x});
    auto dt = derived_tensor(Q, Q, 4);
    auto h4 = homology(dt, -1, 4);
    REQUIRE_FALSE(h4.is_zero);
    for (unsigned D : {6u, 8u}) {
      auto h = homology(derived_tensor(Q, Q, D), -1, D);
      CHECK_FALSE(h.is_zero);
      CHECK(h.rank == h4.rank);
      // the old witness is still a cycle and still not a boundary
      auto c = derived_tensor(Q, Q, D);
      CHECK(format_cochain(c.apply(-1, h4.generators[0])) != "");
      CHECK_FALSE(min_norm_preimage(c, -1, h4.generators[0], D));
    }
  }
}
