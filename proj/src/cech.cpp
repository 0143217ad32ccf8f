#include "afnd/cech.hpp"

#include <algorithm>
#include <map>

namespace afnd {

std::string format_tuple(const CoverTuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + std::to_string(t[i] + 1);
  return out + ")";
}

namespace {

struct TupleAlgebra {
  AlgebraPtr algebra;
  // (original name, tuple position); position 0 for the module's variables
  std::vector<std::pair<std::string, std::size_t>> origin;
};

// Base variable index for each piece variable that is an image of one.
std::map<std::string, std::size_t> base_images(const AlgebraExtension& ext) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < ext.map.images.size(); ++i) {
    const auto& img = ext.map.images[i];
    if (img.terms().size() != 1 || img.degree() != 1 || img.terms().begin()->second != 1)
      throw Error("cover pieces must send base variables to variables");
    out.emplace(format_monomial(*ext.target()->ambient(), img.terms().begin()->first), i);
  }
  return out;
}

TupleAlgebra tuple_algebra(const CoverData& cover, const AlgebraExtension& module, const CoverTuple& t) {
  const AlgebraPtr& M = module.target();
  TupleAlgebra out;
  std::vector<Variable> vars = M->ambient()->variables();
  for (const auto& v : vars) out.origin.emplace_back(v.name, 0);
  std::vector<std::map<std::string, std::string>> renamed(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& piece = cover.pieces.at(t[k]);
    auto from_base = base_images(piece);
    for (const auto& v : piece.target()->ambient()->variables()) {
      if (from_base.count(v.name)) continue;
      std::string name = fresh_name(Polyradius(vars), v.name + "~" + std::to_string(k + 1));
      vars.push_back({name, v.radius});
      out.origin.emplace_back(v.name, k + 1);
      renamed[k].emplace(v.name, name);
    }
  }
  auto amb = make_polyradius(vars);
  std::vector<TateElement> rels;
  for (const auto& r : M->relations()) rels.push_back(r.rebased(amb));
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& piece = cover.pieces[t[k]];
    auto from_base = base_images(piece);
    std::vector<TateElement> images;
    for (const auto& v : piece.target()->ambient()->variables()) {
      auto it = from_base.find(v.name);
      if (it != from_base.end()) images.push_back(module.map.images[it->second].rebased(amb));
      else images.push_back(TateElement::variable(amb, renamed[k].at(v.name)));
    }
    for (const auto& r : piece.relators) rels.push_back(r.rebased(piece.target()->ambient()).substitute(images));
  }
  out.algebra = AffinoidPresentation::make(M->field(), amb, std::move(rels));
  return out;
}

// P(t minus position i) -> P(t), i counted from 1.
AlgebraMap face_map(const TupleAlgebra& source, const TupleAlgebra& target, std::size_t i) {
  std::map<std::pair<std::string, std::size_t>, std::size_t> where;
  for (std::size_t j = 0; j < target.origin.size(); ++j) where.emplace(target.origin[j], j);
  AlgebraMap m{source.algebra, target.algebra, {}};
  const auto& tamb = target.algebra->ambient();
  for (const auto& [name, pos] : source.origin) {
    std::size_t p = pos == 0 ? 0 : (pos < i ? pos : pos + 1);
    std::size_t j = where.at({name, p});
    m.images.push_back(TateElement::variable(tamb, (*tamb)[j].name));
  }
  return m;
}

std::vector<CoverTuple> tuples_of_length(std::size_t pieces, std::size_t m, bool alternating) {
  std::vector<CoverTuple> out;
  CoverTuple cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    std::size_t start = alternating && !cur.empty() ? cur.back() + 1 : 0;
    for (std::size_t j = start; j < pieces; ++j) {
      cur.push_back(j);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace

CechComplex build_complex(const CoverData& cover, const AlgebraExtension& module, bool alternating, std::size_t depth,
                          unsigned D) {
  if (depth == 0) depth = cover.pieces.size();
  if (alternating) depth = std::min(depth, cover.pieces.size());
  CechComplex out;
  ChainComplex& c = out.complex;
  c.first_degree = 0;
  c.truncation = D;
  std::vector<std::vector<TupleAlgebra>> algebras;
  std::vector<std::map<CoverTuple, std::size_t>> where;
  for (std::size_t m = 0; m <= depth; ++m) {
    auto ts = tuples_of_length(cover.pieces.size(), m, alternating);
    if (ts.empty()) break;
    std::vector<TupleAlgebra> alg;
    std::map<CoverTuple, std::size_t> idx;
    ChainComplex::Level level;
    for (std::size_t s = 0; s < ts.size(); ++s) {
      alg.push_back(tuple_algebra(cover, module, ts[s]));
      level.push_back(alg.back().algebra);
      idx.emplace(ts[s], s);
    }
    out.tuples.push_back(std::move(ts));
    algebras.push_back(std::move(alg));
    where.push_back(std::move(idx));
    c.levels.push_back(std::move(level));
  }
  for (std::size_t m = 0; m + 1 < c.levels.size(); ++m) {
    std::vector<DifferentialEntry> entries;
    for (std::size_t ti = 0; ti < out.tuples[m + 1].size(); ++ti) {
      const CoverTuple& t = out.tuples[m + 1][ti];
      const auto& tamb = algebras[m + 1][ti].algebra->ambient();
      for (std::size_t i = 1; i <= t.size(); ++i) {
        CoverTuple s = t;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i - 1));
        auto it = where[m].find(s);
        if (it == where[m].end()) continue;
        Scalar sign = i % 2 ? -1 : 1;
        entries.push_back({ti, it->second, face_map(algebras[m][it->second], algebras[m + 1][ti], i),
                           TateElement::constant(tamb, sign)});
      }
    }
    c.differentials.push_back(std::move(entries));
  }
  return out;
}

AcyclicityResult acyclicity_check(const CoverData& cover, const AlgebraExtension& module, unsigned D, bool alternating,
                                  std::size_t depth) {
  AcyclicityResult r;
  for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
    MorphismVerdict h = is_homotopy_epi(cover.pieces[j], D);
    if (h.outcome != Outcome::Holds && !r.refused) {
      r.refused = true;
      r.diagnostic = "piece " + std::to_string(j + 1) + " is not a homotopy epimorphism at degree <= " +
                     std::to_string(D) + ": " + h.reason;
    }
    r.preconditions.push_back(std::move(h));
    MorphismVerdict t = check_transversal(module, cover.pieces[j], D);
    if (t.outcome != Outcome::Holds && !r.refused) {
      r.refused = true;
      r.diagnostic = "module is not transversal to piece " + std::to_string(j + 1) + " at degree <= " +
                     std::to_string(D) + ": " + t.reason;
    }
    r.preconditions.push_back(std::move(t));
  }
  if (r.refused) return r;
  CechComplex cc = build_complex(cover, module, alternating, depth, D);
  r.witness = strict_exactness(cc.complex, D);
  r.tuples = std::move(cc.tuples);
  return r;
}

}  // namespace afnd
