#include "afnd/spectrum.hpp"

namespace afnd {

namespace {

template <class T>
std::string join(const std::vector<T>& xs, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

TateElement recentred(const TateElement& f, const std::vector<Scalar>& c) {
  const auto& amb = f.ambient();
  if (c.size() != amb->size()) throw Error("point has " + std::to_string(c.size()) + " coordinates, ambient has " +
                                           std::to_string(amb->size()));
  std::vector<TateElement> images;
  for (std::size_t i = 0; i < c.size(); ++i)
    images.push_back(TateElement::variable(amb, (*amb)[i].name) + TateElement::constant(amb, c[i]));
  return f.substitute(images);
}

}  // namespace

std::string format_point(const BerkovichPointSample& pt) {
  if (const auto* r = std::get_if<RigidPoint>(&pt))
    return "rigid(" + join(r->coordinates, [](const Scalar& a) { return format_scalar(a); }) + ")";
  const auto& g = std::get<GaussPoint>(pt);
  return "gauss(" + join(g.center, [](const Scalar& a) { return format_scalar(a); }) + " @ " +
         join(g.radii, [](const NormValue& a) { return a.str(); }) + ")";
}

void check_admissible(const FieldSpec& field, const Polyradius& ambient, const BerkovichPointSample& pt) {
  const std::vector<Scalar>& c =
      std::holds_alternative<RigidPoint>(pt) ? std::get<RigidPoint>(pt).coordinates : std::get<GaussPoint>(pt).center;
  if (c.size() != ambient.size()) throw Error("point " + format_point(pt) + " does not match " + ambient.str());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (norm(field, c[i]) > ambient[i].radius)
      throw Error("point " + format_point(pt) + " lies outside " + ambient.str());
  if (const auto* g = std::get_if<GaussPoint>(&pt)) {
    if (g->radii.size() != ambient.size()) throw Error("point " + format_point(pt) + " does not match " + ambient.str());
    for (std::size_t i = 0; i < g->radii.size(); ++i)
      if (g->radii[i].is_zero() || g->radii[i] > ambient[i].radius)
        throw Error("point " + format_point(pt) + " lies outside " + ambient.str());
  }
}

NormValue seminorm(const FieldSpec& field, const BerkovichPointSample& pt, const TateElement& f) {
  check_admissible(field, *f.ambient(), pt);
  if (const auto* r = std::get_if<RigidPoint>(&pt)) return norm(field, evaluate(field, f, r->coordinates));
  const auto& g = std::get<GaussPoint>(pt);
  return gauss_seminorm(field, recentred(f, g.center), g.radii);
}

DomainData domain_of(const AlgebraExtension& ext) {
  if (!ext.domain) throw Error(to_string(ext.kind) + " extension carries no domain data");
  DomainData out;
  for (const auto& c : *ext.domain) out.push_back({{c.f}, c.g, {c.r}});
  return out;
}

bool member(const FieldSpec& field, const BerkovichPointSample& pt, const RationalDomainData& v) {
  if (v.f.size() != v.r.size()) throw Error("rational domain: " + std::to_string(v.f.size()) + " functions but " +
                                            std::to_string(v.r.size()) + " radii");
  if (v.f.empty()) return true;
  const NormValue g = seminorm(field, pt, v.g);
  for (std::size_t i = 0; i < v.f.size(); ++i)
    if (seminorm(field, pt, v.f[i]) > v.r[i] * g) return false;
  return true;
}

bool member(const FieldSpec& field, const BerkovichPointSample& pt, const DomainData& v) {
  for (const auto& c : v)
    if (!member(field, pt, c)) return false;
  return true;
}

CoverReport cover_check(const FieldSpec& field, const std::vector<DomainData>& cover,
                        const std::vector<BerkovichPointSample>& samples) {
  if (samples.empty()) throw Error("cover check needs at least one sample");
  CoverReport rep;
  for (const auto& pt : samples) {
    std::vector<std::size_t> in;
    for (std::size_t j = 0; j < cover.size(); ++j)
      if (member(field, pt, cover[j])) in.push_back(j);
    if (in.empty()) {
      rep.covered = false;
      rep.uncovered.push_back(pt);
    }
    rep.membership.push_back(std::move(in));
  }
  return rep;
}

std::vector<BerkovichPointSample> default_samples(const FieldSpec& field, const Polyradius& ambient) {
  const std::size_t n = ambient.size();
  // per-coordinate candidates
  std::vector<std::vector<Scalar>> rigid(n);
  std::vector<std::vector<NormValue>> gauss(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NormValue& r = ambient[i].radius;
    rigid[i].push_back(0);
    if (field.is_padic()) {
      const auto p = field.prime;
      Scalar scale = 1;
      for (int k = 0; k <= 2; ++k, scale *= Scalar(static_cast<unsigned long>(p))) {
        if (NormValue::prime_power(p, -k) > r) continue;
        for (std::uint64_t a = 1; a < p; ++a) rigid[i].push_back(Scalar(static_cast<unsigned long>(a)) * scale);
      }
      for (int twice_q = 0; twice_q <= 4; ++twice_q) {
        NormValue rho = NormValue::prime_power(p, Scalar(-twice_q, 2));
        if (rho <= r) gauss[i].push_back(rho);
      }
    } else {
      if (NormValue::one() <= r) {
        rigid[i].push_back(1);
        gauss[i].push_back(NormValue::one());
      }
    }
  }
  std::vector<BerkovichPointSample> out;
  if (n == 0) {
    out.push_back(RigidPoint{});
    return out;
  }
  if (n <= 2) {
    std::vector<std::vector<Scalar>> rows{{}};
    std::vector<std::vector<NormValue>> radii{{}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::vector<Scalar>> nr;
      for (const auto& row : rows)
        for (const auto& c : rigid[i]) {
          nr.push_back(row);
          nr.back().push_back(c);
        }
      rows = std::move(nr);
      std::vector<std::vector<NormValue>> ng;
      for (const auto& row : radii)
        for (const auto& c : gauss[i]) {
          ng.push_back(row);
          ng.back().push_back(c);
        }
      radii = std::move(ng);
    }
    for (auto& c : rows) out.push_back(RigidPoint{std::move(c)});
    for (auto& r : radii) out.push_back(GaussPoint{std::vector<Scalar>(n, Scalar(0)), std::move(r)});
    return out;
  }
  // diagonal: the k-th candidate in every coordinate, for k up to the shortest list
  std::size_t nr = rigid[0].size(), ng = gauss[0].size();
  for (std::size_t i = 1; i < n; ++i) {
    nr = std::min(nr, rigid[i].size());
    ng = std::min(ng, gauss[i].size());
  }
  for (std::size_t k = 0; k < nr; ++k) {
    RigidPoint pt;
    for (std::size_t i = 0; i < n; ++i) pt.coordinates.push_back(rigid[i][k]);
    out.push_back(std::move(pt));
  }
  for (std::size_t k = 0; k < ng; ++k) {
    GaussPoint pt{std::vector<Scalar>(n, Scalar(0)), {}};
    for (std::size_t i = 0; i < n; ++i) pt.radii.push_back(gauss[i][k]);
    out.push_back(std::move(pt));
  }
  return out;
}

AlgebraExtension point_witness(const AlgebraPtr& base, const BerkovichPointSample& pt) {
  const auto& amb = base->ambient();
  check_admissible(base->field(), *amb, pt);
  std::vector<TateElement> shifted;
  const std::vector<Scalar>& c =
      std::holds_alternative<RigidPoint>(pt) ? std::get<RigidPoint>(pt).coordinates : std::get<GaussPoint>(pt).center;
  for (std::size_t i = 0; i < amb->size(); ++i)
    shifted.push_back(TateElement::variable(amb, (*amb)[i].name) - TateElement::constant(amb, c[i]));
  if (std::holds_alternative<RigidPoint>(pt)) return quotient(base, shifted);
  const auto& radii = std::get<GaussPoint>(pt).radii;
  std::vector<NormValue> inv;
  for (const auto& r : radii) inv.push_back(r.inverse());
  return laurent(base, shifted, radii, shifted, inv);
}

bool ConservativityReport::detects_gap() const {
  if (!witness_nonzero) return false;
  for (bool z : pullback_zero)
    if (!z) return false;
  return true;
}

ConservativityReport conservativity_probe(const AlgebraExtension& witness, const std::vector<AlgebraExtension>& pieces,
                                          unsigned D) {
  ConservativityReport rep;
  const AlgebraPtr& W = witness.target();
  rep.witness_nonzero = !W->is_zero() && !W->is_zero_at(D);
  for (const auto& piece : pieces) {
    AlgebraPtr P = tensor_over(witness, piece).algebra;
    bool zero = P->is_zero() || P->is_zero_at(D);
    rep.pullback_zero.push_back(zero);
    if (P->is_zero())
      rep.reasons.push_back(P->zero_reason().value_or("zero"));
    else if (zero)
      rep.reasons.push_back("1 reduces to 0 at level " + std::to_string(D));
    else
      rep.reasons.push_back("1 survives at level " + std::to_string(D));
  }
  return rep;
}

}  // namespace afnd
