#include "afnd/homotopy.hpp"

#include "afnd/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <set>

namespace afnd {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Epi: return "epi";
    case VerdictKind::HomotopyEpi: return "homotopy-epi";
    case VerdictKind::Transversal: return "transversal";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Unresolved: return "unresolved";
  }
  return "?";
}

namespace {

std::vector<std::string> non_base_variables(const AlgebraExtension& ext) {
  std::set<std::string> from_base;
  for (const auto& img : ext.map.images)
    if (img.terms().size() == 1 && img.degree() == 1)
      from_base.insert(format_monomial(*ext.target()->ambient(), img.terms().begin()->first));
  std::vector<std::string> out;
  for (const auto& v : ext.target()->ambient()->variables())
    if (!from_base.count(v.name)) out.push_back(v.name);
  return out;
}

TateElement monic(TateElement f) {
  if (!f.is_zero()) f *= Scalar(1 / f.terms().begin()->second);
  return f;
}

// Fails at the first nonzero negative-degree homology of c.
bool negative_homology(const ChainComplex& c, unsigned D, MorphismVerdict& v) {
  for (int n = c.first_degree; n < 0 && n <= c.last_degree(); ++n) {
    HomologyReport h = homology(c, n, D);
    v.homology.push_back(h);
    if (!h.is_zero) {
      v.outcome = Outcome::Fails;
      v.witness_degree = n;
      v.witness_rank = h.rank;
      v.witness = h.generators.front();
      v.reason = "H^" + std::to_string(n) + " has rank " + std::to_string(h.rank) + " at degree <= " +
                 std::to_string(D);
      return true;
    }
  }
  return false;
}

bool top_mismatch(const ChainComplex& c, const AlgebraMap& q, unsigned D, MorphismVerdict& v, const std::string& what) {
  CokernelComparison cmp = compare_top_homology(c, q, D);
  if (cmp.matches) return false;
  v.outcome = Outcome::Fails;
  v.witness_degree = 0;
  if (cmp.missed) {
    v.witness = Cochain{*cmp.missed};
    v.reason = "H^0 misses " + cmp.missed->str() + " of " + what;
  } else {
    v.witness = cmp.unexplained_kernel;
    v.reason = "H^0 has a class " + format_cochain(*cmp.unexplained_kernel) + " that vanishes in " + what;
  }
  return true;
}

}  // namespace

AlgebraMap multiplication_map(const AlgebraExtension& ext, const TensorProduct& square) {
  const AlgebraPtr& B = ext.target();
  const auto originals = non_base_variables(ext);
  const auto& renamed = square.over_first.new_variables;
  if (originals.size() != renamed.size()) throw Error("multiplication map: variable lists disagree");
  std::map<std::string, std::string> back;
  for (std::size_t i = 0; i < renamed.size(); ++i) back.emplace(renamed[i], originals[i]);
  AlgebraMap mu{square.algebra, B, {}};
  for (const auto& v : square.algebra->ambient()->variables()) {
    auto it = back.find(v.name);
    mu.images.push_back(TateElement::variable(B->ambient(), it == back.end() ? v.name : it->second));
  }
  return mu;
}

MorphismVerdict is_epimorphism(const AlgebraExtension& ext, unsigned D) {
  MorphismVerdict v;
  v.kind = VerdictKind::Epi;
  v.truncation = D;
  TensorProduct sq = tensor_over(ext, ext);
  AlgebraMap mu = multiplication_map(ext, sq);
  const AlgebraPtr& P = sq.algebra;
  const AlgebraPtr& B = ext.target();
  const unsigned L = D + 1 + 2 * std::max(P->max_relation_degree(), B->max_relation_degree());

  std::map<Exponent, std::size_t> index;
  auto coords = [&](const TateElement& f) {
    std::map<std::size_t, Scalar> m;
    for (const auto& [e, c] : f.terms()) m.emplace(index.try_emplace(e, index.size()).first->second, c);
    return SparseVector::from_map(m);
  };
  const auto sources = P->normal_monomials(D, L);
  ExactSolver solver;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    TateElement img = B->normal_form(mu.apply(TateElement::monomial(P->ambient(), sources[k])), L);
    solver.add(coords(img), SparseVector::unit(k));
  }
  if (!solver.kernel().empty()) {
    TateElement w(P->ambient());
    for (const auto& [k, c] : solver.kernel().front().terms()) w.add_term(sources[k], c);
    w = monic(w);
    v.outcome = Outcome::Fails;
    v.witness = Cochain{w};
    v.reason = "multiplication kills " + w.str();
    return v;
  }
  for (const auto& e : B->normal_monomials(D, L)) {
    TateElement m = TateElement::monomial(B->ambient(), e);
    if (!solver.in_span(coords(m))) {
      v.outcome = Outcome::Fails;
      v.witness = Cochain{m};
      v.reason = "multiplication misses " + m.str();
      return v;
    }
  }
  v.outcome = Outcome::Holds;
  v.reason = "multiplication is bijective at degree <= " + std::to_string(D);
  return v;
}

std::optional<std::string> resolution_problem(const AlgebraExtension& ext, unsigned D) {
  ChainComplex res = resolution(ext, D);
  if (res.contractible) return std::nullopt;
  for (int n = res.first_degree; n < 0; ++n) {
    HomologyReport h = homology(res, n, D);
    if (!h.is_zero)
      return "Koszul resolution has H^" + std::to_string(n) + " of rank " + std::to_string(h.rank) + " at degree <= " +
             std::to_string(D);
  }
  return std::nullopt;
}

MorphismVerdict is_homotopy_epi(const AlgebraExtension& ext, unsigned D) {
  MorphismVerdict v;
  v.kind = VerdictKind::HomotopyEpi;
  v.truncation = D;
  if (auto bad = resolution_problem(ext, D)) {
    v.outcome = Outcome::Unresolved;
    v.reason = *bad;
    return v;
  }
  ChainComplex dt = derived_tensor(ext, ext, D);
  if (negative_homology(dt, D, v)) return v;
  TensorProduct sq = tensor_over(ext, ext);
  AlgebraMap q = AlgebraMap::by_name(dt.levels.back().front(), sq.algebra);
  if (top_mismatch(dt, q, D, v, "B (x)_A B")) return v;
  MorphismVerdict epi = is_epimorphism(ext, D);
  if (epi.outcome != Outcome::Holds) {
    v.outcome = epi.outcome;
    v.witness_degree = 0;
    v.witness = epi.witness;
    v.reason = "H^0 = B (x)_A B but " + epi.reason;
    return v;
  }
  v.outcome = Outcome::Holds;
  v.reason = dt.contractible ? "contractible: " + *dt.contractible
                             : "B (x)^L_A B = B at degree <= " + std::to_string(D);
  return v;
}

MorphismVerdict check_transversal(const AlgebraExtension& module, const AlgebraExtension& ext, unsigned D) {
  MorphismVerdict v;
  v.kind = VerdictKind::Transversal;
  v.truncation = D;
  if (auto bad = resolution_problem(ext, D)) {
    v.outcome = Outcome::Unresolved;
    v.reason = *bad;
    return v;
  }
  ChainComplex dt = derived_tensor(module, ext, D);
  if (negative_homology(dt, D, v)) return v;
  TensorProduct t = tensor_over(module, ext);
  AlgebraMap q = AlgebraMap::by_name(dt.levels.back().front(), t.algebra);
  if (top_mismatch(dt, q, D, v, "M (x)_A B")) return v;
  v.outcome = Outcome::Holds;
  v.reason = dt.contractible ? "contractible: " + *dt.contractible
                             : "M (x)^L_A B = M (x)_A B at degree <= " + std::to_string(D);
  return v;
}

}  // namespace afnd
