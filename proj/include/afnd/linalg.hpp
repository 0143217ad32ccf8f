#pragma once

// Exact sparse linear algebra over Q, plain and norm-aware.

#include "afnd/scalar.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace afnd {

/// Sorted (index, coefficient) list without zero coefficients.
class SparseVector {
 public:
  using Entry = std::pair<std::size_t, Scalar>;

  SparseVector() = default;
  static SparseVector unit(std::size_t i, const Scalar& c = 1);
  static SparseVector from_map(const std::map<std::size_t, Scalar>& m);

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Entry>& terms() const { return terms_; }
  Scalar at(std::size_t i) const;

  /// Appends at an index larger than every stored one.
  void push_back(std::size_t i, const Scalar& c);
  /// this += a * x
  void axpy(const Scalar& a, const SparseVector& x);
  void scale(const Scalar& a);

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Entry> terms_;
};

using WeightFn = std::function<NormValue(std::size_t)>;

NormValue weighted_norm(const FieldSpec& field, const SparseVector& v, const WeightFn& weight);

/// Incremental echelon form of a set of image vectors, each tagged with the
/// source combination producing it. Vectors that reduce to zero contribute
/// their (reduced) combination to the kernel.
class ExactSolver {
 public:
  /// Returns true when `image` is independent of the vectors added so far.
  bool add(SparseVector image, SparseVector combo);

  /// A source combination mapping onto `target`, if one exists.
  std::optional<SparseVector> solve(const SparseVector& target) const;
  bool in_span(const SparseVector& v) const;

  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVector>& kernel() const { return kernel_; }

 private:
  // Reduces v in place; accumulates v_original = v_reduced + sum coeff * row.
  void reduce(SparseVector& v, SparseVector* combo) const;

  std::map<std::size_t, std::size_t> pivot_row_;
  std::vector<SparseVector> rows_;
  std::vector<SparseVector> combos_;
  std::vector<SparseVector> kernel_;
};

/// Fully reduced basis of a subspace of a weighted orthogonal space.
///
/// Every basis vector has coefficient 1 at its pivot, zero at all other
/// pivots, and its pivot term attains its norm. Such a basis is orthogonal:
/// ||sum a_k b_k|| = max |a_k| ||b_k||, and the normal form of v (v with the
/// pivot coordinates cleared) has the least norm in the coset v + span.
class OrthogonalBasis {
 public:
  OrthogonalBasis(FieldSpec field, WeightFn weight);

  /// Inserts one vector; the pivot is its entry maximising |c| * weight,
  /// ties to the smallest index.
  bool insert(SparseVector v, SparseVector combo = {});

  /// Batch construction with the global pivot rule: at each step the entry
  /// maximising |a_ij| * w_i / w_dom_j over all remaining columns, ties to
  /// the smallest row index and then the smallest column index.
  static OrthogonalBasis eliminate(FieldSpec field, WeightFn weight, std::vector<SparseVector> columns,
                                   const std::vector<NormValue>& domain_weights);

  SparseVector normal_form(SparseVector v, SparseVector* combo = nullptr) const;
  NormValue norm(const SparseVector& v) const { return weighted_norm(field_, v, weight_); }

  std::size_t rank() const { return vectors_.size(); }
  const std::vector<SparseVector>& vectors() const { return vectors_; }
  const std::vector<SparseVector>& combos() const { return combos_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  const std::vector<SparseVector>& kernel() const { return kernel_; }
  /// ||b_k||, equal to the weight of its pivot.
  NormValue basis_norm(std::size_t k) const { return weight_(pivots_[k]); }

 private:
  void accept(SparseVector v, SparseVector combo, std::size_t pivot);

  FieldSpec field_;
  WeightFn weight_;
  std::vector<SparseVector> vectors_;
  std::vector<SparseVector> combos_;
  std::vector<std::size_t> pivots_;
  std::map<std::size_t, std::size_t> pivot_slot_;
  std::vector<SparseVector> kernel_;
};

}  // namespace afnd
