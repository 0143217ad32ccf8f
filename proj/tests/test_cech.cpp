#include "afnd/cech.hpp"

#include "doctest.h"

using namespace afnd;

namespace {

const FieldSpec Q5 = FieldSpec::padic(5);
const NormValue ONE = NormValue::one();
const NormValue P = NormValue::prime_power(5, 1);
const NormValue PINV = NormValue::prime_power(5, -1);

struct DiskCover {
  PolyradiusPtr amb = make_polyradius({{"x", ONE}});
  AlgebraPtr A = AffinoidPresentation::make(Q5, amb);
  TateElement x = TateElement::variable(amb, "x");
  AlgebraExtension V1 = weierstrass(A, {x}, {PINV});
  AlgebraExtension V2 = laurent(A, {}, {}, {x}, std::vector<NormValue>{P});
  CoverData cover{A, {V1, V2}};
};

std::vector<std::size_t> shape(const ChainComplex& c) {
  std::vector<std::size_t> out;
  for (const auto& l : c.levels) out.push_back(l.size());
  return out;
}

}  // namespace

TEST_SUITE("cech") {
  TEST_CASE("single-piece cover") {
    DiskCover d;
    CoverData one{d.A, {identity_extension(d.A)}};
    auto c = build_complex(one, identity_extension(d.A), true, 0, 6);
    CHECK(shape(c.complex) == std::vector<std::size_t>{1, 1});
    CHECK(format_tuple(c.tuples[1][0]) == "(1)");
    auto r = acyclicity_check(one, identity_extension(d.A), 6);
    CHECK_FALSE(r.refused);
    CHECK(r.witness.exact);
    for (const auto& l : r.witness.levels) CHECK(l.constant == ONE);
  }

  TEST_CASE("two-piece disk cover") {
    DiskCover d;
    auto c = build_complex(d.cover, identity_extension(d.A), true, 0, 6);
    CHECK(c.complex.first_degree == 0);
    CHECK(shape(c.complex) == std::vector<std::size_t>{1, 2, 1});
    CHECK(format_tuple(c.tuples[2][0]) == "(1,2)");
    CHECK_FALSE(find_d_squared_failure(c.complex, 6));
    auto full = build_complex(d.cover, identity_extension(d.A), false, 0, 6);
    CHECK(shape(full.complex) == std::vector<std::size_t>{1, 2, 4});
    CHECK_FALSE(find_d_squared_failure(full.complex, 6));
  }

  TEST_CASE("depth truncation on a three-piece cover") {
    DiskCover d;
    auto V3 = weierstrass(d.A, {d.x * d.x}, {PINV});
    CoverData three{d.A, {d.V1, d.V2, V3}};
    auto alt = build_complex(three, identity_extension(d.A), true, 3, 3);
    CHECK(shape(alt.complex) == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK_FALSE(find_d_squared_failure(alt.complex, 3));
    auto full = build_complex(three, identity_extension(d.A), false, 3, 3);
    CHECK(shape(full.complex) == std::vector<std::size_t>{1, 3, 9, 27});
    CHECK_FALSE(find_d_squared_failure(full.complex, 3));
    auto shallow = build_complex(three, identity_extension(d.A), true, 1, 3);
    CHECK(shape(shallow.complex) == std::vector<std::size_t>{1, 3});
    // alternating depth beyond the cover size adds nothing
    CHECK(build_complex(three, identity_extension(d.A), true, 5, 2).complex.levels.size() == 4);
  }

  TEST_CASE("standard disk cover is strictly exact with constant 1") {
    DiskCover d;
    auto r = acyclicity_check(d.cover, identity_extension(d.A), 20);
    REQUIRE_FALSE(r.refused);
    CHECK(r.witness.exact);
    REQUIRE(r.witness.levels.size() == 3);
    for (const auto& l : r.witness.levels) {
      CHECK(l.exact);
      CHECK(l.constant == ONE);
    }
    CHECK(r.preconditions.size() == 4);
  }

  TEST_CASE("alternating and full complexes agree") {
    DiskCover d;
    for (unsigned D : {4u, 8u}) {
      auto alt = acyclicity_check(d.cover, identity_extension(d.A), D, true);
      CHECK(alt.witness.exact);
      // The full complex does not stop at the cover size, so a cut at depth
      // 3 is only exact below the top.
      auto full = acyclicity_check(d.cover, identity_extension(d.A), D, false, 3);
      REQUIRE(full.witness.levels.size() == 4);
      for (int n = 0; n <= 2; ++n) CHECK(full.witness.levels[static_cast<std::size_t>(n)].exact);
      auto fc = build_complex(d.cover, identity_extension(d.A), false, 3, D);
      for (int n = 0; n <= 2; ++n) CHECK(homology(fc.complex, n, D).is_zero);
    }
    // the fake cover fails in both
    CoverData fake{d.A, {d.V1}};
    auto AW = laurent(d.A, {d.x}, {NormValue::prime_power(5, Scalar(-1, 2))}, {d.x},
                      {NormValue::prime_power(5, Scalar(1, 2))});
    CHECK_FALSE(acyclicity_check(fake, AW, 6, true).witness.exact);
    CHECK_FALSE(acyclicity_check(fake, AW, 6, false, 3).witness.levels.front().exact);
  }

  TEST_CASE("alternating boundaries are projections of full boundaries") {
    DiskCover d;
    const unsigned D = 5;
    auto alt = build_complex(d.cover, identity_extension(d.A), true, 0, D);
    auto full = build_complex(d.cover, identity_extension(d.A), false, 2, D);
    const auto& lvl = alt.complex.level(1);
    REQUIRE(full.tuples[1] == alt.tuples[1]);
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; b <= 3; ++b) {
        Cochain y{TateElement::variable(lvl[0]->ambient(), "x").pow(a),
                  TateElement::variable(lvl[1]->ambient(), "x").pow(b) * TateElement::constant(lvl[1]->ambient(), 5)};
        auto za = alt.complex.apply(1, y);
        auto zf = full.complex.apply(1, y);
        for (std::size_t s = 0; s < alt.tuples[2].size(); ++s) {
          std::size_t f = 0;
          while (full.tuples[2][f] != alt.tuples[2][s]) ++f;
          const auto& B = alt.complex.level(2)[s];
          const auto& F = full.complex.level(2)[f];
          CHECK(B->normal_form(za[s], 12).str() == F->normal_form(zf[f], 12).str());
        }
      }
  }

  TEST_CASE("fake cover by one subdisc") {
    DiskCover d;
    CoverData fake{d.A, {d.V1}};
    auto AW = laurent(d.A, {d.x}, {NormValue::prime_power(5, Scalar(-1, 2))}, {d.x},
                      {NormValue::prime_power(5, Scalar(1, 2))});
    auto r = acyclicity_check(fake, AW, 10);
    REQUIRE_FALSE(r.refused);
    CHECK_FALSE(r.witness.exact);
    REQUIRE_FALSE(r.witness.levels.empty());
    const auto& first = r.witness.levels.front();
    CHECK(first.degree == 0);
    CHECK_FALSE(first.exact);
    REQUIRE(first.counterexample);
    CHECK(format_cochain(*first.counterexample) == "1");

    // with M = A the same cover is exact but the constants blow up
    auto m = acyclicity_check(fake, identity_extension(d.A), 10);
    CHECK(m.witness.exact);
    CHECK(m.witness.levels.front().constant > ONE);
  }

  TEST_CASE("refusal without homotopy epimorphisms") {
    DiskCover d;
    CoverData bad{d.A, {d.V1, quotient(d.A, {d.x})}};
    auto r = acyclicity_check(bad, identity_extension(d.A), 6);
    CHECK(r.refused);
    CHECK(r.diagnostic.find("piece 2") != std::string::npos);
    CHECK(r.diagnostic.find("homotopy epimorphism") != std::string::npos);

    // a module not transversal to a piece
    CoverData closed{d.A, {d.V1}};
    auto k = quotient(d.A, {d.x});
    auto W0 = weierstrass(d.A, {d.x}, {PINV});
    auto rk = acyclicity_check(closed, k, 6);
    CHECK_FALSE(rk.refused);  // A/(x) is transversal to the Weierstrass disc
    CHECK(check_transversal(k, W0, 6).outcome == Outcome::Holds);
  }
}
