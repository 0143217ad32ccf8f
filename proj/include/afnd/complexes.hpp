#pragma once

// Bounded cochain complexes of finite free modules over affinoid algebras,
// their truncated homology, and strict-exactness witnesses.

#include "afnd/affinoid.hpp"
#include "afnd/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace afnd {

/// Component of a differential: source summand -> target summand,
/// a |-> multiplier * map(a).
struct DifferentialEntry {
  std::size_t target = 0;
  std::size_t source = 0;
  std::optional<AlgebraMap> map;  // identity when absent
  TateElement multiplier;         // in the target summand's ambient
};

/// An element of a level: one representative per summand.
using Cochain = std::vector<TateElement>;

/// Levels sit in cohomological degrees first_degree, first_degree + 1, ...;
/// each level is a list of rank-one free summands over the listed algebras.
class ChainComplex {
 public:
  using Level = std::vector<AlgebraPtr>;

  int first_degree = 0;
  std::vector<Level> levels;
  /// differentials[i] maps levels[i] to levels[i + 1].
  std::vector<std::vector<DifferentialEntry>> differentials;
  unsigned truncation = 0;
  /// Koszul relators, in the common level algebra.
  std::vector<TateElement> relators;
  /// Set when a relator is a unit, so the complex is contractible.
  std::optional<std::string> contractible;

  int last_degree() const { return first_degree + static_cast<int>(levels.size()) - 1; }
  bool has_degree(int n) const { return n >= first_degree && n <= last_degree(); }
  std::size_t index(int degree) const;
  const Level& level(int degree) const { return levels.at(index(degree)); }

  Cochain zero(int degree) const;
  /// d applied to a cochain of the given degree, unreduced.
  Cochain apply(int degree, const Cochain& x) const;
  /// Level used for generic normal forms when working at degree D.
  unsigned working_level(unsigned D) const;
};

std::string format_cochain(const Cochain& x);

/// Koszul complex K(relators) over `level_algebra`, in degrees -m..0; the
/// summands in degree -k are indexed by k-subsets in lexicographic order.
ChainComplex koszul(const AlgebraPtr& level_algebra, const std::vector<TateElement>& relators, unsigned D = 0);

/// The Koszul resolution of the target of `ext` over its base.
ChainComplex resolution(const AlgebraExtension& ext, unsigned D = 0);

/// M (x)_A res, for res = resolution(ext) and M an A-algebra given by
/// `module`; the fresh variables of ext are renamed to avoid M's.
ChainComplex derived_tensor(const AlgebraExtension& module, const AlgebraExtension& ext, unsigned D = 0);

struct HomologyReport {
  int degree = 0;
  unsigned truncation = 0;
  bool is_zero = true;
  std::size_t cycles = 0;      // dimension of degree <= D cycles
  std::size_t boundaries = 0;  // rank of the incoming map on degree <= D + slack sources
  std::size_t rank = 0;        // cycles not accounted for by boundaries
  std::vector<Cochain> generators;
  std::optional<std::string> note;
};

HomologyReport homology(const ChainComplex& c, int degree, unsigned D);

struct LevelExactness {
  int degree = 0;
  bool exact = true;
  /// inf-preimage-norm <= constant * ||z|| for every degree <= D boundary z;
  /// at the first level, ||e|| <= constant * ||d e||.
  NormValue constant = NormValue::zero();
  std::optional<Cochain> counterexample;
};

struct ExactnessWitness {
  unsigned truncation = 0;
  bool exact = true;
  std::vector<LevelExactness> levels;
  std::optional<std::string> note;
};

ExactnessWitness strict_exactness(const ChainComplex& c, unsigned D);

/// Least-norm preimage under d of the cochain z at the given degree, over
/// degree <= D sources; nullopt when z is not a truncated boundary.
std::optional<Cochain> min_norm_preimage(const ChainComplex& c, int degree, const Cochain& z, unsigned D);

/// Norm of a cochain: max over summands of the Gauss norm of its normal form.
NormValue cochain_norm(const ChainComplex& c, int degree, const Cochain& x, unsigned D);

struct CokernelComparison {
  bool matches = true;
  /// A degree <= D element of the top level killed by q but not a boundary.
  std::optional<Cochain> unexplained_kernel;
  /// A degree <= D normal monomial of the target missed by q.
  std::optional<TateElement> missed;
};

/// Compares the top homology of c (a single summand at the last level) with
/// the target of q: q must be onto at degree <= D, and its kernel on degree
/// <= D sources must consist of boundaries (of sources up to degree D plus
/// the largest differential degree).
CokernelComparison compare_top_homology(const ChainComplex& c, const AlgebraMap& q, unsigned D);

/// First degree where d o d fails on a degree <= D source, if any.
std::optional<int> find_d_squared_failure(const ChainComplex& c, unsigned D);

}  // namespace afnd
