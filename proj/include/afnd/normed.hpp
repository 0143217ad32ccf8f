#pragma once

// Finite-dimensional non-Archimedean normed spaces in weighted orthogonal
// form k_{w_1} (+) ... (+) k_{w_n}, with ||(c_i)|| = max |c_i| w_i.

#include "afnd/linalg.hpp"
#include "afnd/scalar.hpp"

#include <optional>
#include <span>
#include <vector>

namespace afnd {

struct WeightedSpace {
  std::vector<NormValue> weights;

  WeightedSpace() = default;
  explicit WeightedSpace(std::vector<NormValue> w);
  /// k_r
  static WeightedSpace line(const NormValue& r) { return WeightedSpace({r}); }

  std::size_t dim() const { return weights.size(); }
  NormValue norm(const FieldSpec& field, std::span<const Scalar> coords) const;
  bool operator==(const WeightedSpace&) const = default;
};

/// A linear map between weighted spaces; entries[i][j] is the coefficient of
/// codomain basis vector i in the image of domain basis vector j.
struct NormedMatrix {
  FieldSpec field;
  WeightedSpace domain;
  WeightedSpace codomain;
  std::vector<std::vector<Scalar>> entries;

  NormedMatrix(FieldSpec f, WeightedSpace dom, WeightedSpace cod);
  NormedMatrix(FieldSpec f, WeightedSpace dom, WeightedSpace cod, std::vector<std::vector<Scalar>> rows);

  std::size_t rows() const { return codomain.dim(); }
  std::size_t cols() const { return domain.dim(); }
  std::vector<Scalar> apply(std::span<const Scalar> v) const;
  SparseVector column(std::size_t j) const;
};

NormedMatrix compose(const NormedMatrix& s, const NormedMatrix& t);

NormValue operator_norm(const NormedMatrix& t);

/// Basis of E (x) F ordered row-major with the E index outer.
WeightedSpace tensor_spaces(const WeightedSpace& e, const WeightedSpace& f);

/// Finite direct sum; also the finite product.
WeightedSpace sum_spaces(std::span<const WeightedSpace> spaces);

struct StrictnessReport {
  bool mono = false;
  bool epi = false;
  /// Finite-dimensional maps always have closed image.
  bool strict = true;
  std::size_t rank = 0;
  /// Least C with ||e|| <= C ||T e||; present iff mono.
  std::optional<NormValue> strict_mono_constant;
  /// Least C with inf over preimages ||e|| <= C ||f|| for f in the image
  /// (zero when the image is zero). For epimorphisms this is the strict-epi
  /// constant.
  NormValue quotient_constant = NormValue::zero();
  /// Kernel basis (domain coordinates) when not mono.
  std::vector<SparseVector> kernel;
};

StrictnessReport classify(const NormedMatrix& t);

}  // namespace afnd
