#pragma once

// Truncated verdicts for epimorphisms, homotopy epimorphisms and
// transversality of modules.

#include "afnd/affinoid.hpp"
#include "afnd/complexes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace afnd {

enum class VerdictKind { Epi, HomotopyEpi, Transversal };
enum class Outcome { Holds, Fails, Unresolved };

std::string to_string(VerdictKind k);
std::string to_string(Outcome o);

struct MorphismVerdict {
  VerdictKind kind = VerdictKind::Epi;
  Outcome outcome = Outcome::Unresolved;
  unsigned truncation = 0;
  std::string reason;
  /// Cohomological degree of a nonzero homology witness.
  std::optional<int> witness_degree;
  std::size_t witness_rank = 0;
  std::optional<Cochain> witness;
  /// Negative-degree homology of the derived tensor product, when computed.
  std::vector<HomologyReport> homology;
};

/// The multiplication B (x)_A B -> B is bijective on degree <= D bases.
MorphismVerdict is_epimorphism(const AlgebraExtension& ext, unsigned D);

/// B (x)^L_A B = B at degree <= D, through the Koszul resolution of B.
MorphismVerdict is_homotopy_epi(const AlgebraExtension& ext, unsigned D);

/// M (x)^L_A B -> M (x)_A B is an isomorphism at degree <= D.
MorphismVerdict check_transversal(const AlgebraExtension& module, const AlgebraExtension& ext, unsigned D);

/// Why the Koszul resolution of ext is not exact in negative degrees, if it
/// is not.
std::optional<std::string> resolution_problem(const AlgebraExtension& ext, unsigned D);

/// B (x)_A B -> B sending both copies of a variable to it.
AlgebraMap multiplication_map(const AlgebraExtension& ext, const TensorProduct& square);

}  // namespace afnd
