#include "afnd/complexes.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>

namespace afnd {

std::size_t ChainComplex::index(int degree) const {
  if (!has_degree(degree)) throw Error("degree " + std::to_string(degree) + " outside the complex");
  return static_cast<std::size_t>(degree - first_degree);
}

Cochain ChainComplex::zero(int degree) const {
  Cochain out;
  for (const auto& a : level(degree)) out.emplace_back(a->ambient());
  return out;
}

Cochain ChainComplex::apply(int degree, const Cochain& x) const {
  const std::size_t i = index(degree);
  if (i + 1 >= levels.size()) return {};
  if (x.size() != levels[i].size()) throw Error("cochain has the wrong number of components");
  Cochain out = zero(degree + 1);
  for (const auto& e : differentials[i]) {
    const TateElement& a = x[e.source];
    if (a.is_zero()) continue;
    TateElement img = e.map ? e.map->apply(a) : a.rebased(levels[i + 1][e.target]->ambient());
    out[e.target] += e.multiplier * img;
  }
  return out;
}

unsigned ChainComplex::working_level(unsigned D) const {
  unsigned mult = 0, image = 1, rel = 0;
  for (const auto& d : differentials)
    for (const auto& e : d) {
      mult = std::max(mult, e.multiplier.degree());
      if (e.map)
        for (const auto& img : e.map->images) image = std::max(image, img.degree());
    }
  for (const auto& l : levels)
    for (const auto& a : l) rel = std::max(rel, a->max_relation_degree());
  return D * image + mult + 2 * rel;
}

std::string format_cochain(const Cochain& x) {
  if (x.size() == 1) return x[0].str();
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + x[i].str();
  return out + ")";
}

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

ChainComplex koszul(const AlgebraPtr& level_algebra, const std::vector<TateElement>& relators, unsigned D) {
  ChainComplex c;
  const std::size_t m = relators.size();
  c.first_degree = -static_cast<int>(m);
  c.truncation = D;
  for (const auto& r : relators) c.relators.push_back(r.rebased(level_algebra->ambient()));
  std::vector<std::vector<std::vector<std::size_t>>> subs;
  for (std::size_t k = m + 1; k-- > 0;) {
    subs.push_back(subsets(m, k));
    c.levels.emplace_back(subs.back().size(), level_algebra);
  }
  for (std::size_t i = 0; i + 1 < subs.size(); ++i) {
    std::map<std::vector<std::size_t>, std::size_t> target_index;
    for (std::size_t t = 0; t < subs[i + 1].size(); ++t) target_index.emplace(subs[i + 1][t], t);
    std::vector<DifferentialEntry> entries;
    for (std::size_t s = 0; s < subs[i].size(); ++s) {
      const auto& S = subs[i][s];
      for (std::size_t j = 0; j < S.size(); ++j) {
        std::vector<std::size_t> T = S;
        T.erase(T.begin() + static_cast<std::ptrdiff_t>(j));
        TateElement mult = c.relators[S[j]];
        if (j % 2 == 1) mult = -mult;
        entries.push_back({target_index.at(T), s, std::nullopt, std::move(mult)});
      }
    }
    c.differentials.push_back(std::move(entries));
  }
  for (const auto& r : c.relators) {
    std::vector<TateElement> rels = level_algebra->relations();
    rels.push_back(r);
    AffinoidPresentation q(level_algebra->field(), level_algebra->ambient(), rels);
    if (q.is_zero()) {
      c.contractible = "relator " + r.str() + " is a unit: " + *q.zero_reason();
      break;
    }
  }
  return c;
}

ChainComplex resolution(const AlgebraExtension& ext, unsigned D) {
  return koszul(ext.free_level(), ext.relators, D);
}

ChainComplex derived_tensor(const AlgebraExtension& module, const AlgebraExtension& ext, unsigned D) {
  AlgebraExtension free_ext;
  free_ext.map = ext.map;
  free_ext.map.target = ext.free_level();
  free_ext.new_variables = ext.new_variables;
  free_ext.kind = ExtensionKind::Free;
  TensorProduct t = tensor_over(module, free_ext);
  std::vector<TateElement> rel;
  for (const auto& r : ext.relators) rel.push_back(t.over_second.map.apply(r));
  return koszul(t.algebra, rel, D);
}

// ---------------------------------------------------------------------------

namespace {

// Monomial coordinates of one level: (summand, exponent) -> index. The
// degree <= D normal monomials come first, in summand order and ascending
// grevlex, and are the sources of the outgoing differential.
class Coordinates {
 public:
  Coordinates(const ChainComplex::Level& level, unsigned D, unsigned L) : level_(&level) {
    for (std::size_t s = 0; s < level.size(); ++s)
      for (const auto& e : level[s]->normal_monomials(D, L)) id(s, e);
    sources_ = keys_.size();
  }

  std::size_t sources() const { return sources_; }
  std::size_t id(std::size_t s, const Exponent& e) {
    auto [it, inserted] = index_.try_emplace({s, e}, keys_.size());
    if (inserted) {
      keys_.emplace_back(s, e);
      weights_.push_back(monomial_weight(*(*level_)[s]->ambient(), e));
    }
    return it->second;
  }
  const NormValue& weight(std::size_t i) const { return weights_.at(i); }
  WeightFn weight_fn() const {
    return [this](std::size_t i) { return weights_.at(i); };
  }

  SparseVector coords(const Cochain& x) {
    std::map<std::size_t, Scalar> m;
    for (std::size_t s = 0; s < x.size(); ++s)
      for (const auto& [e, c] : x[s].terms()) m[id(s, e)] += c;
    return SparseVector::from_map(m);
  }
  Cochain element(const SparseVector& v) const {
    Cochain out;
    for (const auto& a : *level_) out.emplace_back(a->ambient());
    for (const auto& [i, c] : v.terms()) out[keys_[i].first].add_term(keys_[i].second, c);
    return out;
  }
  Cochain source(std::size_t k) const { return element(SparseVector::unit(k)); }

 private:
  const ChainComplex::Level* level_;
  std::map<std::pair<std::size_t, Exponent>, std::size_t> index_;
  std::vector<std::pair<std::size_t, Exponent>> keys_;
  std::vector<NormValue> weights_;
  std::size_t sources_ = 0;
};

class Truncation {
 public:
  Truncation(const ChainComplex& c, unsigned D) : c_(c), D_(D), L_(c.working_level(D)) {
    coords_.reserve(c.levels.size());
    for (const auto& l : c.levels) coords_.emplace_back(l, D, L_);
    images_.resize(c.levels.size());
  }

  Coordinates& coords(std::size_t i) { return coords_[i]; }
  unsigned level() const { return L_; }

  Cochain normalize(std::size_t i, Cochain x) const {
    for (std::size_t s = 0; s < x.size(); ++s) x[s] = c_.levels[i][s]->normal_form(x[s], L_);
    return x;
  }

  /// d of source k at level i, in level i+1 coordinates.
  const std::vector<SparseVector>& images(std::size_t i) {
    auto& out = images_[i];
    if (out.empty() && coords_[i].sources() > 0) {
      for (std::size_t k = 0; k < coords_[i].sources(); ++k) {
        Cochain y = normalize(i + 1, c_.apply(c_.first_degree + static_cast<int>(i), coords_[i].source(k)));
        out.push_back(coords_[i + 1].coords(y));
      }
    }
    return out;
  }

  // Orthogonal image basis of d_i with source combinations, and the
  // orthogonal kernel basis in source weights.
  struct Elimination {
    std::unique_ptr<OrthogonalBasis> image;
    std::unique_ptr<OrthogonalBasis> kernel;
  };
  Elimination eliminate(std::size_t i) {
    Elimination el;
    el.image = std::make_unique<OrthogonalBasis>(field(), coords_[i + 1].weight_fn());
    const auto& imgs = images(i);
    for (std::size_t k = 0; k < imgs.size(); ++k) el.image->insert(imgs[k], SparseVector::unit(k));
    el.kernel = std::make_unique<OrthogonalBasis>(field(), coords_[i].weight_fn());
    for (const auto& k : el.image->kernel()) el.kernel->insert(k);
    return el;
  }

  NormValue preimage_constant(const Elimination& el) {
    NormValue best = NormValue::zero();
    for (std::size_t k = 0; k < el.image->rank(); ++k) {
      NormValue pre = el.kernel->norm(el.kernel->normal_form(el.image->combos()[k]));
      best = max(best, pre / el.image->basis_norm(k));
    }
    return best;
  }

  FieldSpec field() const {
    for (const auto& l : c_.levels)
      if (!l.empty()) return l.front()->field();
    return FieldSpec::trivial();
  }

 private:
  const ChainComplex& c_;
  unsigned D_;
  unsigned L_;
  std::vector<Coordinates> coords_;
  std::vector<std::vector<SparseVector>> images_;
};

// Boundary candidates come from sources of degree <= D + slack: a degree
// <= D boundary may need a preimage of higher degree, by at most the
// degree of the differential.
unsigned boundary_slack(const ChainComplex& c) {
  unsigned s = 0;
  for (const auto& d : c.differentials)
    for (const auto& e : d) s = std::max(s, e.multiplier.degree());
  return s;
}

// Span of d(level i - 1) over degree <= D + slack sources, with a way to
// test level-i cochains against it.
class BoundarySpan {
 public:
  BoundarySpan(const ChainComplex& c, std::size_t i, unsigned D) : i_(i), t_(c, D + boundary_slack(c)) {
    if (i > 0)
      for (const auto& v : t_.images(i - 1)) b_.add(v, {});
  }
  bool contains(const Cochain& x) { return b_.in_span(t_.coords(i_).coords(x)); }
  /// Adds x to the span; true when it was independent.
  bool add(const Cochain& x) { return b_.add(t_.coords(i_).coords(x), {}); }
  std::size_t rank() const { return b_.rank(); }

 private:
  std::size_t i_;
  Truncation t_;
  ExactSolver b_;
};

}  // namespace

HomologyReport homology(const ChainComplex& c, int degree, unsigned D) {
  HomologyReport r;
  r.degree = degree;
  r.truncation = D;
  const std::size_t i = c.index(degree);
  if (c.contractible) {
    r.note = "contractible: " + *c.contractible;
    return r;
  }
  Truncation t(c, D);
  std::vector<SparseVector> cycles;
  if (i + 1 < c.levels.size()) {
    ExactSolver z;
    const auto& imgs = t.images(i);
    for (std::size_t k = 0; k < imgs.size(); ++k) z.add(imgs[k], SparseVector::unit(k));
    cycles = z.kernel();
  } else {
    for (std::size_t k = 0; k < t.coords(i).sources(); ++k) cycles.push_back(SparseVector::unit(k));
  }
  r.cycles = cycles.size();
  BoundarySpan b(c, i, D);
  r.boundaries = b.rank();
  for (const auto& z : cycles) {
    if (b.add(t.coords(i).element(z))) {
      ++r.rank;
      r.generators.push_back(t.coords(i).element(z));
    }
  }
  r.is_zero = r.rank == 0;
  return r;
}

ExactnessWitness strict_exactness(const ChainComplex& c, unsigned D) {
  ExactnessWitness w;
  w.truncation = D;
  if (c.contractible) {
    w.note = "contractible: " + *c.contractible;
    for (int n = c.first_degree; n <= c.last_degree(); ++n) w.levels.push_back({n, true, NormValue::zero(), {}});
    return w;
  }
  Truncation t(c, D);
  std::vector<std::optional<Truncation::Elimination>> elim(c.levels.size());
  auto get = [&](std::size_t i) -> Truncation::Elimination& {
    if (!elim[i]) elim[i] = t.eliminate(i);
    return *elim[i];
  };
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    LevelExactness le;
    le.degree = c.first_degree + static_cast<int>(i);
    if (i == 0) {
      if (c.levels.size() == 1) {
        le.exact = t.coords(0).sources() == 0;
        if (!le.exact) le.counterexample = t.coords(0).source(0);
      } else {
        auto& el = get(0);
        le.exact = el.image->kernel().empty();
        if (!le.exact) le.counterexample = t.coords(0).element(el.kernel->vectors().front());
        le.constant = t.preimage_constant(el);
      }
    } else {
      // Cycles at level i must lie in the image of d_{i-1}.
      auto& in = get(i - 1);
      std::vector<SparseVector> cycles;
      if (i + 1 < c.levels.size()) {
        cycles = get(i).image->kernel();
      } else {
        for (std::size_t k = 0; k < t.coords(i).sources(); ++k) cycles.push_back(SparseVector::unit(k));
      }
      for (const auto& z : cycles) {
        if (!in.image->normal_form(z).empty()) {
          le.exact = false;
          le.counterexample = t.coords(i).element(z);
          break;
        }
      }
      le.constant = t.preimage_constant(in);
    }
    if (!le.exact) w.exact = false;
    w.levels.push_back(std::move(le));
  }
  return w;
}

std::optional<Cochain> min_norm_preimage(const ChainComplex& c, int degree, const Cochain& z, unsigned D) {
  const std::size_t i = c.index(degree);
  if (i == 0) return std::nullopt;
  Truncation t(c, D);
  auto el = t.eliminate(i - 1);
  SparseVector v = t.coords(i).coords(t.normalize(i, z));
  SparseVector combo;
  if (!el.image->normal_form(v, &combo).empty()) return std::nullopt;
  return t.coords(i - 1).element(el.kernel->normal_form(combo));
}

NormValue cochain_norm(const ChainComplex& c, int degree, const Cochain& x, unsigned D) {
  const std::size_t i = c.index(degree);
  const unsigned L = c.working_level(D);
  NormValue best = NormValue::zero();
  for (std::size_t s = 0; s < x.size(); ++s) {
    const auto& a = c.levels[i][s];
    best = max(best, gauss_norm(a->field(), a->normal_form(x[s], L)));
  }
  return best;
}

CokernelComparison compare_top_homology(const ChainComplex& c, const AlgebraMap& q, unsigned D) {
  CokernelComparison out;
  const std::size_t i = c.levels.size() - 1;
  if (c.levels[i].size() != 1) throw Error("top level must have a single summand");
  const AlgebraPtr& target = q.target;
  const unsigned L = std::max(c.working_level(D), D + 2 * target->max_relation_degree() + 1);
  const auto targets = target->normal_monomials(D, L);
  if (c.contractible) {
    if (!targets.empty()) {
      out.matches = false;
      out.missed = TateElement::monomial(target->ambient(), targets.front());
    }
    return out;
  }
  Truncation t(c, D);
  std::map<Exponent, std::size_t> tindex;
  auto tcoords = [&](const TateElement& f) {
    std::map<std::size_t, Scalar> m;
    for (const auto& [e, k] : f.terms()) m.emplace(tindex.try_emplace(e, tindex.size()).first->second, k);
    return SparseVector::from_map(m);
  };
  ExactSolver qs;
  for (std::size_t k = 0; k < t.coords(i).sources(); ++k) {
    TateElement img = target->normal_form(q.apply(t.coords(i).source(k)[0]), L);
    qs.add(tcoords(img), SparseVector::unit(k));
  }
  for (const auto& e : targets) {
    if (!qs.in_span(tcoords(TateElement::monomial(target->ambient(), e)))) {
      out.matches = false;
      out.missed = TateElement::monomial(target->ambient(), e);
      return out;
    }
  }
  BoundarySpan b(c, i, D);
  for (const auto& k : qs.kernel()) {
    if (!b.contains(t.coords(i).element(k))) {
      out.matches = false;
      out.unexplained_kernel = t.coords(i).element(k);
      return out;
    }
  }
  return out;
}

std::optional<int> find_d_squared_failure(const ChainComplex& c, unsigned D) {
  Truncation t(c, D);
  for (std::size_t i = 0; i + 2 < c.levels.size(); ++i) {
    const int deg = c.first_degree + static_cast<int>(i);
    for (std::size_t k = 0; k < t.coords(i).sources(); ++k) {
      Cochain y = t.normalize(i + 1, c.apply(deg, t.coords(i).source(k)));
      Cochain z = t.normalize(i + 2, c.apply(deg + 1, y));
      for (const auto& comp : z)
        if (!comp.is_zero()) {
          spdlog::debug("d^2 != 0 at degree {} on {}", deg, format_cochain(t.coords(i).source(k)));
          return deg;
        }
    }
  }
  return std::nullopt;
}

}  // namespace afnd
