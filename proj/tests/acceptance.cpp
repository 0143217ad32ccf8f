// Acceptance criteria: one PASS/FAIL line each, limits pinned below.

#include "afnd/cech.hpp"
#include "afnd/homotopy.hpp"
#include "afnd/normed.hpp"
#include "afnd/spectrum.hpp"

#include "oracles.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

using namespace afnd;

namespace {

constexpr double kGaussSeconds = 5;
constexpr double kKoszulSeconds = 30;
constexpr double kTateSeconds = 60;
constexpr int kGaussPairs = 200;
constexpr unsigned kGaussDegree = 6;
constexpr int kTensorCases = 20;
constexpr int kKoszulCases = 20;
constexpr unsigned kKoszulD = 12;
constexpr unsigned kHoepiD = 10;
constexpr unsigned kTateD = 20;
constexpr int kTateCochains = 25;

const FieldSpec Q5 = FieldSpec::padic(5);
const NormValue ONE = NormValue::one();
const NormValue P = NormValue::prime_power(5, 1);
const NormValue PINV = NormValue::prime_power(5, -1);

struct Result {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Disc {
  PolyradiusPtr amb = make_polyradius({{"x", ONE}});
  AlgebraPtr A = AffinoidPresentation::make(Q5, amb);
  TateElement x = TateElement::variable(amb, "x");
  TateElement one = TateElement::constant(amb, 1);
  AlgebraExtension V1 = weierstrass(A, {x}, {PINV});
  AlgebraExtension V2 = laurent(A, {}, {}, {x}, std::vector<NormValue>{P});
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

Result gauss_multiplicativity() {
  Result o;
  oracle::Rng rng(2024);
  auto amb = make_polyradius({{"x", ONE}, {"y", PINV}});
  const std::vector<mpq_class> radius_exp{0, -1};
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kGaussPairs && o.pass; ++i) {
    auto fp = oracle::random_poly(rng, 2, kGaussDegree / 2, 6);
    auto gp = oracle::random_poly(rng, 2, kGaussDegree - kGaussDegree / 2, 6);
    auto f = fp.build(amb), g = gp.build(amb);
    const NormValue nfg = gauss_norm(Q5, f * g);
    o.require(nfg == gauss_norm(Q5, f) * gauss_norm(Q5, g), "||fg|| != ||f|| ||g|| for " + f.str() + ", " + g.str());
    auto e = oracle::gauss_exponent(oracle::product(fp, gp).terms, radius_exp, 5);
    o.require(e && nfg == NormValue::prime_power(5, *e), "oracle disagrees on " + (f * g).str());
  }
  const double s = seconds_since(t0);
  o.require(s < kGaussSeconds, "took " + fmt_seconds(s));
  if (o.pass) o.detail = std::to_string(kGaussPairs) + " pairs in " + fmt_seconds(s);
  return o;
}

Result tensor_arithmetic() {
  Result o;
  auto k = [](long n) { return WeightedSpace::line(NormValue::from_rational(n)); };
  o.require(tensor_spaces(k(2), k(3)) == k(6), "k2 (x) k3 != k6");
  o.require(tensor_spaces(k(7), k(1)) == k(7), "k7 (x) k1 != k7");
  oracle::Rng rng(99);
  for (int i = 0; i < kTensorCases; ++i) {
    // r = a/b, or 5^(n/2) for fractional exponents
    if (i % 2 == 0) {
      mpq_class r1(rng.range(1, 40), rng.range(1, 40)), r2(rng.range(1, 40), rng.range(1, 40));
      r1.canonicalize();
      r2.canonicalize();
      auto t = tensor_spaces(WeightedSpace::line(NormValue::from_rational(r1)), WeightedSpace::line(NormValue::from_rational(r2)));
      o.require(t == WeightedSpace::line(NormValue::from_rational(mpq_class(r1 * r2))),
                "k_r (x) k_s != k_rs for r = " + r1.get_str() + ", s = " + r2.get_str());
    } else {
      mpq_class a(rng.range(-6, 6), 2), b(rng.range(-6, 6), 3);
      a.canonicalize();
      b.canonicalize();
      auto t = tensor_spaces(WeightedSpace::line(NormValue::prime_power(5, a)), WeightedSpace::line(NormValue::prime_power(5, b)));
      o.require(t == WeightedSpace::line(NormValue::prime_power(5, mpq_class(a + b))),
                "5^" + a.get_str() + " (x) 5^" + b.get_str());
    }
  }
  if (o.pass) o.detail = "2 anchors and " + std::to_string(kTensorCases) + " random cases";
  return o;
}

Result koszul_injectivity() {
  Result o;
  oracle::Rng rng(12);
  auto B = AffinoidPresentation::make(Q5, make_polyradius({{"x", ONE}, {"T", ONE}}));
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kKoszulCases && o.pass; ++i) {
    auto fp = oracle::random_poly(rng, 1, 4, 4, 5, -2, 3);
    TateElement f(B->ambient());
    for (const auto& [e, c] : fp.terms) f.add_term({e[0], 0}, c);
    auto k = koszul(B, {TateElement::variable(B->ambient(), "T") - f}, kKoszulD);
    auto h = homology(k, -1, kKoszulD);
    o.require(h.is_zero, "H^-1 != 0 for f = " + f.str());
  }
  const double s = seconds_since(t0);
  o.require(s < kKoszulSeconds, "took " + fmt_seconds(s));
  if (o.pass) o.detail = std::to_string(kKoszulCases) + " relators at D = 12 in " + fmt_seconds(s);
  return o;
}

Result homotopy_epi_suite() {
  Result o;
  Disc d;
  auto W = weierstrass(d.A, {d.x}, {PINV});
  auto L = laurent(d.A, {}, {}, {d.x}, std::vector<NormValue>{P});
  o.require(!W.target()->is_zero() && !L.target()->is_zero(), "a localization is the zero algebra");
  auto R = rational(d.A, {d.x}, d.x - d.one, {ONE}, BezoutCertificate{TateElement::constant(d.amb, -1), {d.one}});
  for (const auto& [name, e] : {std::pair{"Weierstrass", &W}, {"Laurent", &L}, {"rational", &R}}) {
    auto v = is_homotopy_epi(*e, kHoepiD);
    o.require(v.outcome == afnd::Outcome::Holds, std::string(name) + ": " + v.reason);
  }
  o.require(R.certificate.has_value(), "rational localization carries no certificate");
  auto k = quotient(d.A, {d.x});
  auto v = is_homotopy_epi(k, kHoepiD);
  o.require(v.outcome == afnd::Outcome::Fails, "closed point: " + v.reason);
  o.require(v.witness_degree == -1 && v.witness_rank == 1, "closed point witness is not an H^-1 class of rank 1");
  o.require(v.witness.has_value(), "closed point verdict has no witness");
  o.require(is_epimorphism(k, kHoepiD).outcome == afnd::Outcome::Holds, "closed point is not an epimorphism");
  if (o.pass) o.detail = "W, L, R hold; A -> A/(x) is epi with H^-1 of rank 1";
  return o;
}

// Splits z = sum c_n x^n (n in [-N, N]) on the annulus |x| = 1/5 into its
// disc part a (n >= 0) and outer part b = -(n < 0), so that a - b = z; all
// norms are max |c_n| 5^-n, computed from valuations.
Result tate_acyclicity() {
  Result o;
  Disc d;
  CoverData cover{d.A, {d.V1, d.V2}};
  const auto t0 = std::chrono::steady_clock::now();
  auto r = acyclicity_check(cover, identity_extension(d.A), kTateD);
  o.require(!r.refused, r.diagnostic);
  o.require(r.witness.exact, "alternating complex is not exact");
  o.require(r.witness.levels.size() == 3, "expected three levels");
  for (const auto& l : r.witness.levels)
    o.require(l.exact && l.constant == ONE, "degree " + std::to_string(l.degree) + " constant " + l.constant.str());

  auto cc = build_complex(cover, identity_extension(d.A), true, 0, kTateD).complex;
  const auto& a1 = cc.level(1)[0]->ambient();
  const auto& b1 = cc.level(1)[1]->ambient();
  const auto& z2 = cc.level(2)[0]->ambient();
  auto var_of = [](const PolyradiusPtr& amb, char lead) {
    for (std::size_t i = 0; i < amb->size(); ++i)
      if ((*amb)[i].name[0] == lead) return TateElement::variable(amb, (*amb)[i].name);
    throw Error("no variable starting with " + std::string(1, lead));
  };
  const TateElement T1 = var_of(a1, 'T'), S1 = var_of(b1, 'S'), T12 = var_of(z2, 'T'), S12 = var_of(z2, 'S');

  oracle::Rng rng(5);
  for (int i = 0; i < kTateCochains && o.pass; ++i) {
    TateElement z(z2), a(a1), b(b1);
    std::optional<mpq_class> e;
    const int terms = static_cast<int>(rng.range(1, 5));
    std::map<long, mpq_class> coeffs;
    for (int j = 0; j < terms; ++j) coeffs[rng.range(-8, 8)] += rng.coefficient(5, -2, 2);
    for (const auto& [n, c] : coeffs) {
      if (c == 0) continue;
      const unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
      z += TateElement::constant(z2, c) * (n >= 0 ? T12 : S12).pow(m);
      if (n >= 0)
        a += TateElement::constant(a1, c) * T1.pow(m);
      else
        b -= TateElement::constant(b1, c) * S1.pow(m);
      mpq_class x = -oracle::valuation(c, 5) - n;
      if (!e || x > *e) e = x;
    }
    if (!e) continue;
    const NormValue expect = NormValue::prime_power(5, *e);
    o.require(cochain_norm(cc, 2, {z}, kTateD) == expect, "norm of " + z.str());
    auto diff = cc.apply(1, {a, b});
    o.require(cc.level(2)[0]->normal_form(diff[0] - z, cc.working_level(kTateD)).is_zero(),
              "oracle split of " + z.str() + " is not a preimage");
    o.require(cochain_norm(cc, 1, {a, b}, kTateD) == expect, "oracle preimage norm of " + z.str());
    auto pre = min_norm_preimage(cc, 2, {z}, kTateD);
    o.require(pre.has_value(), z.str() + " has no preimage");
    if (pre) o.require(cochain_norm(cc, 1, *pre, kTateD) == expect, "least preimage norm of " + z.str());
  }
  const double s = seconds_since(t0);
  o.require(s < kTateSeconds, "took " + fmt_seconds(s));
  if (o.pass)
    o.detail = "D = 20, constants 1, 1, 1; " + std::to_string(kTateCochains) + " Laurent splits agree; " + fmt_seconds(s);
  return o;
}

Result cover_surjectivity() {
  Result o;
  Disc d;
  auto samples = default_samples(Q5, *d.amb);
  std::vector<NormValue> radii;
  for (const auto& pt : samples)
    if (const auto* g = std::get_if<GaussPoint>(&pt)) radii.push_back(g->radii[0]);
  std::vector<NormValue> want;
  for (int q = 0; q <= 4; ++q) want.push_back(NormValue::prime_power(5, mpq_class(-q, 2)));
  o.require(radii == want, "default Gauss radii differ");
  o.require(cover_check(Q5, {domain_of(d.V1), domain_of(d.V2)}, samples).covered, "full cover reported uncovered");
  auto outer = laurent(d.A, {}, {}, {d.x}, std::vector<NormValue>{ONE});
  auto gap = cover_check(Q5, {domain_of(d.V1), domain_of(outer)}, samples);
  o.require(!gap.covered && gap.uncovered.size() == 1, "gap cover: expected one uncovered point");
  if (!gap.uncovered.empty()) {
    o.require(format_point(gap.uncovered[0]) == "gauss(0 @ 5^-1/2)", "uncovered " + format_point(gap.uncovered[0]));
    auto rep = conservativity_probe(point_witness(d.A, gap.uncovered[0]), {d.V1, outer}, kHoepiD);
    o.require(rep.witness_nonzero, "annulus witness is zero");
    o.require(rep.detects_gap(), "a pullback of the witness survives");
  }
  if (o.pass) o.detail = std::to_string(samples.size()) + " samples; gap at gauss(0 @ 5^-1/2), pullbacks vanish";
  return o;
}

Result amitsur_d_squared() {
  Result o;
  Disc d;
  CoverData three{d.A, {d.V1, d.V2, weierstrass(d.A, {d.x * d.x}, {PINV})}};
  for (bool alternating : {true, false})
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      auto c = build_complex(three, identity_extension(d.A), alternating, depth, 4).complex;
      o.require(c.levels.size() == depth + 1, "wrong number of levels");
      auto f = find_d_squared_failure(c, 4);
      o.require(!f, std::string(alternating ? "alternating" : "full") + " d o d != 0 at degree " +
                        (f ? std::to_string(*f) : ""));
    }
  if (o.pass) o.detail = "alternating and full, depth 1..3";
  return o;
}

Result transversality() {
  Result o;
  Disc d;
  auto k = quotient(d.A, {d.x});
  auto L = laurent(d.A, {}, {}, {d.x}, std::vector<NormValue>{ONE});
  auto good = check_transversal(k, L, kHoepiD);
  o.require(good.outcome == afnd::Outcome::Holds, "A/(x) vs Laurent: " + good.reason);
  o.require(L.target()->is_zero() || tensor_over(k, L).algebra->is_zero(), "A/(x) (x) B is not zero");
  auto bad = check_transversal(k, k, kHoepiD);
  o.require(bad.outcome == afnd::Outcome::Fails, "A/(x) vs fiber: " + bad.reason);
  o.require(bad.witness_degree == -1 && bad.witness_rank == 1, "fiber witness is not H^-1 of rank 1");
  if (bad.witness) o.require(format_cochain(*bad.witness) == "1", "fiber witness " + format_cochain(*bad.witness));
  if (o.pass) o.detail = "zero on both sides for the Laurent domain; H^-1 = k on the fiber";
  return o;
}

Result strictness_classification() {
  Result o;
  auto k1 = WeightedSpace::line(ONE);
  auto mult = classify(NormedMatrix(Q5, k1, k1, {{Scalar(5)}}));
  o.require(mult.mono && mult.strict_mono_constant && *mult.strict_mono_constant == P, "mult by 5: C != 5");
  auto zero = classify(NormedMatrix(Q5, k1, k1, {{Scalar(0)}}));
  o.require(!zero.mono && !zero.epi && zero.strict, "zero map misclassified");
  WeightedSpace k12({ONE, NormValue::from_rational(2)});
  auto proj = classify(NormedMatrix(Q5, k12, k1, {{Scalar(1), Scalar(0)}}));
  o.require(proj.epi && !proj.mono && proj.quotient_constant == ONE, "projection: C != 1");
  if (o.pass) o.detail = "mult by 5 (C = 5), zero map, projection (C = 1)";
  return o;
}

std::string run_cli_json(const std::string& file) {
  const std::string cmd = std::string(AFND_CLI) + " run --json - " + file + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw Error("cannot run " + cmd);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe.get())) out.append(buf, n);
  return out;
}

Result determinism() {
  Result o;
  const std::string dir = AFND_SCENARIO_DIR;
  int n = 0;
  for (const char* f : {"unit-disk", "gap-cover", "closed-point", "transversal", "norm-table"}) {
    const std::string path = dir + "/" + f + ".afnd";
    const std::string first = run_cli_json(path);
    o.require(!first.empty() && first.front() == '{', std::string(f) + ": no JSON report");
    o.require(first == run_cli_json(path), std::string(f) + ": reports differ");
    ++n;
  }
  if (o.pass) o.detail = std::to_string(n) + " bundled scenarios, byte-identical";
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"gauss multiplicativity", gauss_multiplicativity},
      {"one-dimensional tensor arithmetic", tensor_arithmetic},
      {"koszul injectivity", koszul_injectivity},
      {"homotopy-epimorphism suite", homotopy_epi_suite},
      {"tate acyclicity", tate_acyclicity},
      {"cover surjectivity", cover_surjectivity},
      {"amitsur differential", amitsur_d_squared},
      {"transversality", transversality},
      {"strictness classification", strictness_classification},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << "\n";
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
