#pragma once

// Sampled points of the Berkovich spectrum of a polydisc: rigid points and
// Gauss points of closed subdiscs, with membership in rational domains.

#include "afnd/affinoid.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace afnd {

struct RigidPoint {
  std::vector<Scalar> coordinates;
};

/// The sup seminorm on the polydisc |x_i - center_i| <= radii_i.
struct GaussPoint {
  std::vector<Scalar> center;
  std::vector<NormValue> radii;
};

using BerkovichPointSample = std::variant<RigidPoint, GaussPoint>;

std::string format_point(const BerkovichPointSample& pt);

/// Throws unless the point lies in the ambient polydisc.
void check_admissible(const FieldSpec& field, const Polyradius& ambient, const BerkovichPointSample& pt);

NormValue seminorm(const FieldSpec& field, const BerkovichPointSample& pt, const TateElement& f);

/// |f_i| <= r_i |g| for every i.
struct RationalDomainData {
  std::vector<TateElement> f;
  TateElement g;
  std::vector<NormValue> r;
};

/// A domain given as an intersection of rational domains (Laurent domains
/// contribute one condition per inequality).
using DomainData = std::vector<RationalDomainData>;

/// Domain data of a localization, in its base ambient.
DomainData domain_of(const AlgebraExtension& ext);

bool member(const FieldSpec& field, const BerkovichPointSample& pt, const RationalDomainData& v);
bool member(const FieldSpec& field, const BerkovichPointSample& pt, const DomainData& v);

struct CoverReport {
  bool covered = true;
  std::vector<BerkovichPointSample> uncovered;
  /// For each sample, the pieces containing it.
  std::vector<std::vector<std::size_t>> membership;
};

CoverReport cover_check(const FieldSpec& field, const std::vector<DomainData>& cover,
                        const std::vector<BerkovichPointSample>& samples);

/// Rigid points 0 and a p^k (1 <= a < p, 0 <= k <= 2) and Gauss points at
/// centre 0 with radii p^-q, q in {0, 1/2, 1, 3/2, 2}, kept inside the
/// polydisc. Two variables take the product grid, more take the diagonal.
std::vector<BerkovichPointSample> default_samples(const FieldSpec& field, const Polyradius& ambient);

/// A localization of `base` cutting out exactly the point: the annulus
/// |x_i - c_i| = rho_i for Gauss points, the quotient by (x_i - c_i) for
/// rigid ones.
AlgebraExtension point_witness(const AlgebraPtr& base, const BerkovichPointSample& pt);

struct ConservativityReport {
  bool witness_nonzero = false;
  /// Whether witness (x)_A piece vanishes, per piece.
  std::vector<bool> pullback_zero;
  std::vector<std::string> reasons;
  /// Nonzero witness with every pullback zero.
  bool detects_gap() const;
};

ConservativityReport conservativity_probe(const AlgebraExtension& witness, const std::vector<AlgebraExtension>& pieces,
                                          unsigned D);

}  // namespace afnd
