#pragma once

// Amitsur and Cech-Amitsur complexes of finite covers, and Tate acyclicity.

#include "afnd/affinoid.hpp"
#include "afnd/complexes.hpp"
#include "afnd/homotopy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace afnd {

struct CoverData {
  AlgebraPtr base;
  std::vector<AlgebraExtension> pieces;
};

/// Summand indices of a tuple level: tuples of piece indices.
using CoverTuple = std::vector<std::size_t>;

struct CechComplex {
  ChainComplex complex;
  /// tuples[m][s] is the tuple of summand s in degree m.
  std::vector<std::vector<CoverTuple>> tuples;
};

/// 0 -> M -> prod M (x) A_i -> prod M (x) A_i (x) A_j -> ... in degrees
/// 0..depth (alternating: strictly increasing tuples only). Piece variables
/// at tuple position k are suffixed "~k". depth 0 selects the cover size.
CechComplex build_complex(const CoverData& cover, const AlgebraExtension& module, bool alternating,
                          std::size_t depth = 0, unsigned D = 0);

struct AcyclicityResult {
  bool refused = false;
  std::string diagnostic;
  std::vector<MorphismVerdict> preconditions;
  ExactnessWitness witness;
  /// Summand tuples per degree of the checked complex.
  std::vector<std::vector<CoverTuple>> tuples;
};

/// Requires every piece to be a homotopy epimorphism and M to be transversal
/// to every piece at degree D, then checks strict exactness.
AcyclicityResult acyclicity_check(const CoverData& cover, const AlgebraExtension& module, unsigned D,
                                  bool alternating = true, std::size_t depth = 0);

std::string format_tuple(const CoverTuple& t);

}  // namespace afnd
