#include "afnd/tate.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace afnd;

namespace {

const FieldSpec Q5 = FieldSpec::padic(5);

PolyradiusPtr disc(const NormValue& r) { return make_polyradius({{"x", r}}); }

}  // namespace

TEST_SUITE("tate") {
  TEST_CASE("gauss norm examples") {
    auto a = disc(NormValue::one());
    CHECK(gauss_norm(Q5, TateElement(a)).is_zero());
    CHECK(gauss_norm(Q5, parse_element(a, "5 + x")) == NormValue::one());
    auto b = disc(NormValue::prime_power(5, 1));
    CHECK(gauss_norm(Q5, parse_element(b, "5*x^2")) == NormValue::prime_power(5, 1));
  }

  TEST_CASE("multiplication examples") {
    auto a = disc(NormValue::one());
    auto f = parse_element(a, "3*x^2 - 1/5");
    CHECK(multiply(f, TateElement::constant(a, 1)) == f);
    auto two = disc(NormValue::from_rational(2));
    auto x = TateElement::variable(two, "x");
    CHECK(multiply(x, x) == parse_element(two, "x^2"));
    CHECK(gauss_norm(Q5, x * x) == NormValue::from_rational(4));
    auto p = parse_element(a, "5 + x") * parse_element(a, "5 - x");
    CHECK(p == parse_element(a, "25 - x^2"));
    CHECK(gauss_norm(Q5, p) == NormValue::one());
    CHECK_THROWS_AS(multiply(x, TateElement::variable(a, "x")), Error);
  }

  TEST_CASE("evaluation examples") {
    auto a = disc(NormValue::one());
    CHECK(evaluate(Q5, TateElement::variable(a, "x"), {0}) == 0);
    CHECK(evaluate(Q5, parse_element(a, "5 + x"), {5}) == 10);
    CHECK(evaluate(Q5, TateElement::constant(a, Scalar(7, 3)), {Scalar(2, 3)}) == Scalar(7, 3));
    CHECK_THROWS_AS(evaluate(Q5, TateElement::variable(a, "x"), {Scalar(1, 5)}), Error);
    CHECK_THROWS_AS(evaluate(Q5, TateElement::variable(a, "x"), {1, 2}), Error);
  }

  TEST_CASE("gauss seminorm examples") {
    auto a = disc(NormValue::one());
    auto half = NormValue::prime_power(5, Scalar(-1, 2));
    CHECK(gauss_seminorm(Q5, TateElement::variable(a, "x"), {half}) == half);
    CHECK(gauss_seminorm(Q5, TateElement::constant(a, 1), {half}) == NormValue::one());
    CHECK(gauss_seminorm(Q5, parse_element(a, "5 + x"), {NormValue::prime_power(5, -2)}) ==
          NormValue::prime_power(5, -1));
    CHECK_THROWS_AS(gauss_seminorm(Q5, TateElement::variable(a, "x"), {NormValue::prime_power(5, 1)}), Error);
    CHECK_THROWS_AS(gauss_seminorm(Q5, TateElement::variable(a, "x"), {NormValue::zero()}), Error);
  }

  TEST_CASE("free tensor products") {
    auto x = make_polyradius({{"x", NormValue::from_rational(2)}});
    auto y = make_polyradius({{"y", NormValue::from_rational(3)}});
    CHECK(*tensor_free(*x, Polyradius()) == *x);
    auto xy = tensor_free(*x, *y);
    CHECK(xy->str() == "{x:2^1, y:3^1}");
    auto xx = tensor_free(*x, *x);
    REQUIRE(xx->size() == 2);
    CHECK((*xx)[1].name == "x'");
    CHECK((*xx)[1].radius == NormValue::from_rational(2));
  }

  TEST_CASE("polyradius validation") {
    CHECK_THROWS_AS(make_polyradius({{"x", NormValue::one()}, {"x", NormValue::one()}}), Error);
    CHECK_THROWS_AS(make_polyradius({{"x", NormValue::zero()}}), Error);
    auto a = disc(NormValue::one());
    CHECK_THROWS_AS(TateElement::variable(a, "y"), Error);
  }

  TEST_CASE("parsing and printing") {
    auto a = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::one()}});
    auto f = parse_element(a, "5 + 3*x^2*y");
    CHECK(f.str() == "3*x^2*y + 5");
    CHECK(parse_element(a, f.str()) == f);
    CHECK(parse_element(a, "(x + y)^2") == parse_element(a, "x^2 + 2*x*y + y^2"));
    CHECK(parse_element(a, "x/5 - -y") == parse_element(a, "1/5*x + y"));
    CHECK(parse_element(a, "0").is_zero());
    CHECK_THROWS_AS(parse_element(a, "x + "), Error);
    CHECK_THROWS_AS(parse_element(a, "z"), Error);
    CHECK_THROWS_AS(parse_element(a, "x/y"), Error);
  }

  TEST_CASE("grevlex order") {
    // total degree first
    CHECK(grevlex_compare({2, 0}, {0, 1}) > 0);
    // equal degree: the smaller last exponent is the larger monomial
    CHECK(grevlex_compare({1, 1}, {0, 2}) > 0);
    CHECK(grevlex_compare({2, 0}, {1, 1}) > 0);
    CHECK(grevlex_compare({1, 0, 1}, {0, 2, 0}) < 0);
    CHECK(grevlex_compare({1, 1}, {1, 1}) == 0);
    auto m = monomials_up_to(2, {0, 1}, 2);
    REQUIRE(m.size() == 6);
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(grevlex_compare(m[i - 1], m[i]) < 0);
    CHECK(monomials_up_to(3, {2}, 3).size() == 4);
  }

  TEST_CASE("gauss norm agrees with the exponent oracle and is multiplicative") {
    oracle::Rng rng(2024);
    const std::vector<mpq_class> radii{0, -1};
    auto amb = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::prime_power(5, -1)}});
    for (int i = 0; i < 200; ++i) {
      auto f = oracle::random_poly(rng, 2, 3, 4), g = oracle::random_poly(rng, 2, 3, 4);
      auto F = f.build(amb), G = g.build(amb);
      CHECK(gauss_norm(Q5, F) == NormValue::prime_power(5, *oracle::gauss_exponent(f.terms, radii, 5)));
      auto fg = oracle::product(f, g);
      CHECK(F * G == fg.build(amb));
      CHECK(gauss_norm(Q5, F * G) == gauss_norm(Q5, F) * gauss_norm(Q5, G));
    }
  }

  TEST_CASE("ultrametric inequality for gauss norms") {
    oracle::Rng rng(7);
    auto amb = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::prime_power(5, 1)}});
    for (int i = 0; i < 200; ++i) {
      auto F = oracle::random_poly(rng, 2, 3, 3).build(amb);
      auto G = oracle::random_poly(rng, 2, 3, 3).build(amb);
      if (i % 4 == 0) G = G - F;
      NormValue nf = gauss_norm(Q5, F), ng = gauss_norm(Q5, G), ns = gauss_norm(Q5, F + G);
      CHECK(ns <= max(nf, ng));
      if (nf != ng) CHECK(ns == max(nf, ng));
    }
  }

  TEST_CASE("evaluation is bounded by the gauss norm") {
    oracle::Rng rng(8);
    auto amb = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::prime_power(5, -1)}});
    for (int i = 0; i < 100; ++i) {
      auto F = oracle::random_poly(rng, 2, 4, 4).build(amb);
      std::vector<Scalar> pt{rng.coefficient(5, 0, 2), rng.coefficient(5, 1, 3)};
      CHECK(norm(Q5, evaluate(Q5, F, pt)) <= gauss_norm(Q5, F));
    }
  }

  TEST_CASE("seminorm at the ambient radius is the gauss norm") {
    oracle::Rng rng(9);
    auto amb = make_polyradius({{"x", NormValue::prime_power(5, Scalar(1, 2))}, {"y", NormValue::one()}});
    for (int i = 0; i < 50; ++i) {
      auto F = oracle::random_poly(rng, 2, 4, 4).build(amb);
      CHECK(gauss_seminorm(Q5, F, {(*amb)[0].radius, (*amb)[1].radius}) == gauss_norm(Q5, F));
    }
  }

  TEST_CASE("trivial field") {
    auto amb = disc(NormValue::prime_power(2, -1));
    auto f = parse_element(amb, "25*x^3 + 1/7");
    CHECK(gauss_norm(FieldSpec::trivial(), f) == NormValue::one());
    CHECK(gauss_norm(FieldSpec::trivial(), parse_element(amb, "x^2")) == NormValue::prime_power(2, -2));
  }

  TEST_CASE("substitution and rebasing") {
    auto a = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::one()}});
    auto f = parse_element(a, "x^2 + y");
    auto g = f.substitute({parse_element(a, "x + 1"), TateElement::variable(a, "x")});
    CHECK(g == parse_element(a, "x^2 + 3*x + 1"));
    auto b = make_polyradius({{"y", NormValue::one()}, {"z", NormValue::one()}, {"x", NormValue::one()}});
    CHECK(f.rebased(b) == parse_element(b, "x^2 + y"));
    CHECK_THROWS_AS(parse_element(b, "z").rebased(a), Error);
  }
}
