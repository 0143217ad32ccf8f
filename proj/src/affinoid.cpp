#include "afnd/affinoid.hpp"

#include "afnd/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>

namespace afnd {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Substitution: return "substitution";
    case Strategy::CoordinateInverse: return "coordinate-inverse";
    case Strategy::GenericBounded: return "generic-bounded";
  }
  return "?";
}

std::string to_string(ExtensionKind k) {
  switch (k) {
    case ExtensionKind::Identity: return "identity";
    case ExtensionKind::Weierstrass: return "weierstrass";
    case ExtensionKind::Laurent: return "laurent";
    case ExtensionKind::Rational: return "rational";
    case ExtensionKind::Quotient: return "quotient";
    case ExtensionKind::Free: return "free";
    case ExtensionKind::Tensor: return "tensor";
    case ExtensionKind::Composite: return "composite";
  }
  return "?";
}

namespace {

TateElement monic(TateElement f) {
  if (!f.is_zero()) f *= Scalar(1 / f.terms().begin()->second);
  return f;
}

void push_unique(std::vector<TateElement>& list, TateElement f) {
  if (f.is_zero()) return;
  if (std::find(list.begin(), list.end(), f) == list.end()) list.push_back(std::move(f));
}

Exponent unit_exponent(std::size_t n, std::size_t i) {
  Exponent e(n, 0);
  e[i] = 1;
  return e;
}

// u*v = c read off a two-term relation c1*u*v + c0.
std::optional<InversePair> as_pair(const TateElement& r) {
  if (r.terms().size() != 2) return std::nullopt;
  Scalar c0 = r.constant_term();
  if (c0 == 0) return std::nullopt;
  const auto& [e, c1] = *r.terms().begin();
  std::vector<std::size_t> hit;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > 1) return std::nullopt;
    if (e[i] == 1) hit.push_back(i);
  }
  if (hit.size() != 2) return std::nullopt;
  return InversePair{hit[0], hit[1], Scalar(-c0 / c1)};
}

TateElement replace_variable(const TateElement& f, std::size_t v, const TateElement& h) {
  if (!f.uses(v)) return f;
  std::vector<TateElement> images;
  images.reserve(f.ambient()->size());
  for (std::size_t i = 0; i < f.ambient()->size(); ++i)
    images.push_back(i == v ? h : TateElement::monomial(f.ambient(), unit_exponent(f.ambient()->size(), i)));
  return f.substitute(images);
}

// Truncated quotient V_L / W_L, W_L spanned by m * rel of degree <= L.
struct Macaulay {
  unsigned level = 0;
  std::vector<Exponent> monomials;  // descending grevlex
  std::map<Exponent, std::size_t, GrevlexGreater> index;
  std::vector<NormValue> weights;
  std::unique_ptr<OrthogonalBasis> basis;
  std::set<std::size_t> pivots;

  SparseVector coords(const TateElement& f) const {
    std::map<std::size_t, Scalar> m;
    for (const auto& [e, c] : f.terms()) {
      auto it = index.find(e);
      if (it == index.end()) throw Error("element exceeds the truncation level");
      m.emplace(it->second, c);
    }
    return SparseVector::from_map(m);
  }
  TateElement element(const PolyradiusPtr& ambient, const SparseVector& v) const {
    TateElement f(ambient);
    for (const auto& [i, c] : v.terms()) f.add_term(monomials[i], c);
    return f;
  }
};

}  // namespace

struct AffinoidPresentation::Analysis {
  Strategy strategy = Strategy::Substitution;
  std::optional<std::string> zero_reason;
  std::vector<std::optional<TateElement>> images;
  std::vector<InversePair> pairs;
  std::vector<TateElement> residual;
  std::vector<std::size_t> free_vars;
  unsigned max_degree = 0;

  std::mutex mu;
  std::map<unsigned, std::shared_ptr<const Macaulay>> cache;

  TateElement substitute(const TateElement& w) const {
    bool needed = false;
    for (std::size_t i = 0; i < images.size() && !needed; ++i)
      if (images[i] && w.uses(i)) needed = true;
    if (!needed) return w;
    const auto& amb = w.ambient();
    std::vector<TateElement> imgs;
    imgs.reserve(amb->size());
    for (std::size_t i = 0; i < amb->size(); ++i)
      imgs.push_back(images[i] ? *images[i] : TateElement::monomial(amb, unit_exponent(amb->size(), i)));
    return w.substitute(imgs);
  }
};

namespace {

std::shared_ptr<const Macaulay> build_macaulay(const FieldSpec& field, const PolyradiusPtr& ambient,
                                               const std::vector<std::size_t>& free_vars,
                                               const std::vector<TateElement>& relations, unsigned level) {
  auto mac = std::make_shared<Macaulay>();
  mac->level = level;
  auto ascending = monomials_up_to(ambient->size(), free_vars, level);
  mac->monomials.assign(ascending.rbegin(), ascending.rend());
  for (std::size_t i = 0; i < mac->monomials.size(); ++i) {
    mac->index.emplace(mac->monomials[i], i);
    mac->weights.push_back(monomial_weight(*ambient, mac->monomials[i]));
  }
  const auto* w = &mac->weights;
  mac->basis = std::make_unique<OrthogonalBasis>(field, [w](std::size_t i) { return (*w)[i]; });
  for (const auto& m : ascending) {
    const unsigned dm = total_degree(m);
    for (const auto& rel : relations) {
      if (dm + rel.degree() > level) continue;
      mac->basis->insert(mac->coords(rel.shifted(m)));
    }
  }
  mac->pivots.insert(mac->basis->pivots().begin(), mac->basis->pivots().end());
  spdlog::debug("macaulay level {}: {} monomials, rank {}", level, mac->monomials.size(), mac->basis->rank());
  return mac;
}

}  // namespace

AffinoidPresentation::AffinoidPresentation(FieldSpec field, PolyradiusPtr ambient, std::vector<TateElement> relations)
    : field_(field), ambient_(std::move(ambient)), analysis_(std::make_shared<Analysis>()) {
  if (!ambient_) throw Error("null ambient");
  for (auto& r : relations) {
    TateElement f = r.rebased(ambient_);
    push_unique(relations_, std::move(f));
  }

  Analysis& an = *analysis_;
  const std::size_t n = ambient_->size();
  an.images.assign(n, std::nullopt);

  std::vector<TateElement> rels;
  for (const auto& r : relations_) push_unique(rels, monic(r));

  auto apply = [&](std::size_t v, const TateElement& h) {
    for (auto& img : an.images)
      if (img) img = replace_variable(*img, v, h);
    an.images[v] = h;
    std::vector<TateElement> next;
    for (const auto& r : rels) push_unique(next, monic(replace_variable(r, v, h)));
    rels = std::move(next);
  };

  for (;;) {
    bool zero = false;
    for (const auto& r : rels) {
      Scalar c0 = r.constant_term();
      if (c0 == 0) continue;
      if (r.is_constant()) {
        an.zero_reason = "relation reduces to a nonzero constant";
        zero = true;
        break;
      }
      TateElement rest = r - TateElement::constant(ambient_, c0);
      if (compare(gauss_norm(field_, rest), norm(field_, c0)) < 0) {
        an.zero_reason = "relation " + r.str() + " is a unit (dominant constant term)";
        zero = true;
        break;
      }
    }
    if (zero) break;

    std::optional<std::pair<std::size_t, TateElement>> best;
    for (const auto& r : rels) {
      for (std::size_t v = n; v-- > 0;) {
        if (best && v <= best->first) break;
        Scalar c = r.coefficient(unit_exponent(n, v));
        if (c == 0) continue;
        TateElement rest = r - TateElement::monomial(ambient_, unit_exponent(n, v), c);
        if (rest.uses(v)) continue;
        TateElement h = rest * Scalar(-1 / c);
        if (compare(gauss_norm(field_, h), (*ambient_)[v].radius) <= 0) {
          best.emplace(v, std::move(h));
          break;
        }
      }
    }
    if (best) {
      spdlog::debug("substitute {} -> {}", (*ambient_)[best->first].name, best->second.str());
      apply(best->first, best->second);
      continue;
    }

    // Two inverse relations sharing a variable identify their partners.
    bool rewrote = false;
    std::vector<std::pair<std::size_t, InversePair>> pairs;
    for (std::size_t i = 0; i < rels.size(); ++i)
      if (auto p = as_pair(rels[i])) pairs.emplace_back(i, *p);
    for (std::size_t a = 0; a < pairs.size() && !rewrote; ++a) {
      for (std::size_t b = a + 1; b < pairs.size() && !rewrote; ++b) {
        const InversePair& p = pairs[a].second;
        const InversePair& q = pairs[b].second;
        std::optional<std::size_t> shared;
        std::size_t v = 0, w = 0;
        if (p.u == q.u) shared = p.u, v = p.v, w = q.v;
        else if (p.u == q.v) shared = p.u, v = p.v, w = q.u;
        else if (p.v == q.u) shared = p.v, v = p.u, w = q.v;
        else if (p.v == q.v) shared = p.v, v = p.u, w = q.u;
        if (!shared) continue;
        if (v == w) {
          an.zero_reason = "incompatible inverse relations";
          zero = true;
          rewrote = true;
          break;
        }
        // w = (q.c / p.c) v
        Scalar ratio = q.c / p.c;
        const NormValue rv = (*ambient_)[v].radius, rw = (*ambient_)[w].radius;
        const NormValue nr = norm(field_, ratio);
        const bool drop_w = compare(nr * rv, rw) <= 0;
        const bool drop_v = compare(rw / nr, rv) <= 0;
        bool eliminate_w = drop_w;
        if (drop_w && drop_v) {
          auto c = compare(rw, rv);
          eliminate_w = c > 0 || (c == 0 && w > v);
        }
        if (eliminate_w) apply(w, TateElement::monomial(ambient_, unit_exponent(n, v), ratio));
        else apply(v, TateElement::monomial(ambient_, unit_exponent(n, w), Scalar(1 / ratio)));
        rewrote = true;
      }
    }
    if (zero) break;
    if (!rewrote) break;
  }

  for (std::size_t i = 0; i < n; ++i)
    if (!an.images[i]) an.free_vars.push_back(i);

  if (an.zero_reason) {
    an.strategy = rels.empty() ? Strategy::Substitution : Strategy::GenericBounded;
  } else if (rels.empty()) {
    an.strategy = Strategy::Substitution;
  } else {
    bool all_pairs = true;
    for (const auto& r : rels) {
      if (auto p = as_pair(r)) an.pairs.push_back(*p);
      else all_pairs = false;
    }
    if (all_pairs) {
      an.strategy = Strategy::CoordinateInverse;
    } else {
      an.pairs.clear();
      an.strategy = Strategy::GenericBounded;
      an.residual = rels;
    }
  }
  for (const auto& r : rels) an.max_degree = std::max(an.max_degree, r.degree());
  if (an.strategy == Strategy::CoordinateInverse) an.residual = rels;
}

AlgebraPtr AffinoidPresentation::make(FieldSpec field, PolyradiusPtr ambient, std::vector<TateElement> relations) {
  return std::make_shared<const AffinoidPresentation>(field, std::move(ambient), std::move(relations));
}

Strategy AffinoidPresentation::strategy() const { return analysis_->strategy; }
bool AffinoidPresentation::is_zero() const { return analysis_->zero_reason.has_value(); }
std::optional<std::string> AffinoidPresentation::zero_reason() const { return analysis_->zero_reason; }

std::map<std::size_t, TateElement> AffinoidPresentation::substitutions() const {
  std::map<std::size_t, TateElement> out;
  for (std::size_t i = 0; i < analysis_->images.size(); ++i)
    if (analysis_->images[i]) out.emplace(i, *analysis_->images[i]);
  return out;
}

std::vector<InversePair> AffinoidPresentation::inverse_pairs() const { return analysis_->pairs; }
std::vector<TateElement> AffinoidPresentation::residual_relations() const { return analysis_->residual; }
std::vector<std::size_t> AffinoidPresentation::free_variables() const { return analysis_->free_vars; }
unsigned AffinoidPresentation::max_relation_degree() const {
  unsigned d = analysis_->max_degree;
  for (const auto& r : relations_) d = std::max(d, r.degree());
  return d;
}

TateElement AffinoidPresentation::normal_form(const TateElement& w, unsigned level) const {
  TateElement f = w.rebased(ambient_);
  const Analysis& an = *analysis_;
  if (an.zero_reason) return TateElement(ambient_);
  f = an.substitute(f);
  if (an.strategy == Strategy::Substitution) return f;
  if (an.strategy == Strategy::CoordinateInverse) {
    TateElement out(ambient_);
    for (const auto& [e, c] : f.terms()) {
      Exponent m = e;
      Scalar coef = c;
      for (const auto& p : an.pairs) {
        const unsigned k = std::min(m[p.u], m[p.v]);
        if (!k) continue;
        m[p.u] -= k;
        m[p.v] -= k;
        mpq_class ck;
        mpz_pow_ui(ck.get_num_mpz_t(), p.c.get_num_mpz_t(), k);
        mpz_pow_ui(ck.get_den_mpz_t(), p.c.get_den_mpz_t(), k);
        coef *= ck;
      }
      out.add_term(m, coef);
    }
    return out;
  }
  level = std::max(level, f.degree());
  std::shared_ptr<const Macaulay> mac;
  {
    std::lock_guard<std::mutex> lock(analysis_->mu);
    auto& slot = analysis_->cache[level];
    if (!slot) slot = build_macaulay(field_, ambient_, an.free_vars, an.residual, level);
    mac = slot;
  }
  return mac->element(ambient_, mac->basis->normal_form(mac->coords(f)));
}

ReducedForm AffinoidPresentation::reduce(const TateElement& w, unsigned D) const {
  if (w.degree() > D)
    throw Error("truncation degree " + std::to_string(D) + " is below the degree " + std::to_string(w.degree()) +
                " of " + w.str());
  TateElement rep = normal_form(w, D);
  NormValue bound = gauss_norm(field_, rep);
  return {std::move(rep), std::move(bound), D};
}

std::vector<Exponent> AffinoidPresentation::normal_monomials(unsigned D, unsigned level) const {
  const Analysis& an = *analysis_;
  if (an.zero_reason) return {};
  auto all = monomials_up_to(ambient_->size(), an.free_vars, D);
  if (an.strategy == Strategy::Substitution) return all;
  std::vector<Exponent> out;
  if (an.strategy == Strategy::CoordinateInverse) {
    for (auto& e : all) {
      bool divisible = false;
      for (const auto& p : an.pairs)
        if (e[p.u] && e[p.v]) divisible = true;
      if (!divisible) out.push_back(std::move(e));
    }
    return out;
  }
  level = std::max(level, D);
  // Populate the cache through normal_form.
  normal_form(TateElement::constant(ambient_, 1), level);
  std::shared_ptr<const Macaulay> mac;
  {
    std::lock_guard<std::mutex> lock(analysis_->mu);
    mac = analysis_->cache[level];
  }
  for (auto& e : all)
    if (!mac->pivots.count(mac->index.at(e))) out.push_back(std::move(e));
  return out;
}

bool AffinoidPresentation::is_zero_at(unsigned level) const {
  return is_zero() || normal_form(TateElement::constant(ambient_, 1), level).is_zero();
}

std::string AffinoidPresentation::str() const {
  std::string out = "k" + ambient_->str();
  if (!relations_.empty()) {
    out += "/(";
    for (std::size_t i = 0; i < relations_.size(); ++i) out += (i ? ", " : "") + relations_[i].str();
    out += ")";
  }
  return out;
}

// ---------------------------------------------------------------------------

TateElement AlgebraMap::apply(const TateElement& w) const {
  const PolyradiusPtr& tgt = target->ambient();
  TateElement f = w.rebased(source->ambient());
  if (source->ambient()->size() == 0) return TateElement::constant(tgt, f.constant_term());
  return f.substitute(images);
}

AlgebraMap AlgebraMap::by_name(AlgebraPtr source, AlgebraPtr target) {
  AlgebraMap m{source, target, {}};
  for (const auto& v : source->ambient()->variables()) m.images.push_back(TateElement::variable(target->ambient(), v.name));
  return m;
}

bool AlgebraMap::is_well_defined(unsigned level) const {
  for (const auto& r : source->relations())
    if (!target->normal_form(apply(r), level).is_zero()) return false;
  return true;
}

AlgebraMap compose(const AlgebraMap& second, const AlgebraMap& first) {
  AlgebraMap m{first.source, second.target, {}};
  for (const auto& img : first.images) m.images.push_back(second.apply(img));
  return m;
}

// ---------------------------------------------------------------------------

AlgebraPtr AlgebraExtension::free_level() const {
  std::vector<TateElement> rels;
  for (const auto& r : base()->relations()) rels.push_back(map.apply(r));
  return AffinoidPresentation::make(target()->field(), target()->ambient(), std::move(rels));
}

bool AlgebraExtension::is_localization() const { return domain.has_value(); }

AlgebraExtension identity_extension(const AlgebraPtr& a) {
  AlgebraExtension e{AlgebraMap::identity(a), {}, {}, ExtensionKind::Identity, std::vector<DomainCondition>{}, {}};
  return e;
}

namespace {

std::vector<std::string> default_names(const Polyradius& base, const std::string& stem, std::size_t m,
                                       const std::vector<std::string>& given) {
  if (!given.empty()) {
    if (given.size() != m) throw Error("wrong number of variable names for " + stem);
    return given;
  }
  std::vector<std::string> out;
  std::vector<Variable> seen = base.variables();
  for (std::size_t i = 0; i < m; ++i) {
    std::string name = fresh_name(Polyradius(seen), m == 1 ? stem : stem + std::to_string(i + 1));
    out.push_back(name);
    seen.push_back({name, NormValue::one()});
  }
  return out;
}

// base{new}/(base relations, relators(new ambient)).
AlgebraExtension extend(const AlgebraPtr& a, const std::vector<Variable>& vars,
                        const std::function<std::vector<TateElement>(const PolyradiusPtr&)>& relators,
                        ExtensionKind kind) {
  std::vector<Variable> all = a->ambient()->variables();
  std::vector<std::string> names;
  for (const auto& v : vars) {
    all.push_back(v);
    names.push_back(v.name);
  }
  auto amb = make_polyradius(std::move(all));
  std::vector<TateElement> rel = relators(amb);
  std::vector<TateElement> rels;
  for (const auto& r : a->relations()) rels.push_back(r.rebased(amb));
  for (const auto& r : rel) rels.push_back(r);
  auto target = AffinoidPresentation::make(a->field(), amb, std::move(rels));
  AlgebraExtension e;
  e.map = AlgebraMap::by_name(a, target);
  e.new_variables = std::move(names);
  for (auto& r : rel)
    if (!r.is_zero()) e.relators.push_back(std::move(r));
  e.kind = kind;
  return e;
}

}  // namespace

AlgebraExtension weierstrass(const AlgebraPtr& a, const std::vector<TateElement>& f, const std::vector<NormValue>& r,
                             const std::vector<std::string>& names) {
  if (f.size() != r.size()) throw Error("weierstrass: f and r differ in length");
  auto nm = default_names(*a->ambient(), "T", f.size(), names);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < f.size(); ++i) vars.push_back({nm[i], r[i]});
  auto e = extend(a, vars, [&](const PolyradiusPtr& amb) {
    std::vector<TateElement> out;
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(TateElement::variable(amb, nm[i]) - f[i].rebased(amb));
    return out;
  }, ExtensionKind::Weierstrass);
  std::vector<DomainCondition> dom;
  for (std::size_t i = 0; i < f.size(); ++i)
    dom.push_back({f[i].rebased(a->ambient()), TateElement::constant(a->ambient(), 1), r[i]});
  e.domain = std::move(dom);
  return e;
}

AlgebraExtension laurent(const AlgebraPtr& a, const std::vector<TateElement>& f, const std::vector<NormValue>& p,
                         const std::vector<TateElement>& g, const std::vector<NormValue>& q,
                         const std::vector<std::string>& t_names, const std::vector<std::string>& s_names) {
  if (f.size() != p.size() || g.size() != q.size()) throw Error("laurent: data lists differ in length");
  auto tn = default_names(*a->ambient(), "T", f.size(), t_names);
  std::vector<Variable> used = a->ambient()->variables();
  for (std::size_t i = 0; i < tn.size(); ++i) used.push_back({tn[i], p[i]});
  auto sn = default_names(Polyradius(used), "S", g.size(), s_names);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < f.size(); ++i) vars.push_back({tn[i], p[i]});
  for (std::size_t j = 0; j < g.size(); ++j) vars.push_back({sn[j], q[j]});
  auto e = extend(a, vars, [&](const PolyradiusPtr& amb) {
    std::vector<TateElement> out;
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(TateElement::variable(amb, tn[i]) - f[i].rebased(amb));
    for (std::size_t j = 0; j < g.size(); ++j)
      out.push_back(g[j].rebased(amb) * TateElement::variable(amb, sn[j]) - TateElement::constant(amb, 1));
    return out;
  }, ExtensionKind::Laurent);
  std::vector<DomainCondition> dom;
  const auto& base = a->ambient();
  for (std::size_t i = 0; i < f.size(); ++i) dom.push_back({f[i].rebased(base), TateElement::constant(base, 1), p[i]});
  for (std::size_t j = 0; j < g.size(); ++j) dom.push_back({TateElement::constant(base, 1), g[j].rebased(base), q[j]});
  e.domain = std::move(dom);
  return e;
}

AlgebraExtension rational(const AlgebraPtr& a, const std::vector<TateElement>& f, const TateElement& g,
                          const std::vector<NormValue>& r, std::optional<BezoutCertificate> certificate,
                          const std::vector<std::string>& names) {
  if (f.size() != r.size()) throw Error("rational: f and r differ in length");
  const auto& base = a->ambient();
  TateElement gb = g.rebased(base);
  if (gb == TateElement::constant(base, 1) && !certificate) return weierstrass(a, f, r, names);

  if (!certificate && gb.terms().size() == 1 && gb.degree() == 1 && gb.terms().begin()->second == 1) {
    // g = x: f_i = c + x*q gives (1/c) f_i - (q/c) x = 1.
    const Exponent& ex = gb.terms().begin()->first;
    const std::size_t xi = static_cast<std::size_t>(std::find(ex.begin(), ex.end(), 1u) - ex.begin());
    for (std::size_t i = 0; i < f.size() && !certificate; ++i) {
      TateElement fi = f[i].rebased(base);
      Scalar c = fi.constant_term();
      if (c == 0) continue;
      TateElement rest = fi - TateElement::constant(base, c);
      TateElement q(base);
      bool divisible = true;
      for (const auto& [e, coef] : rest.terms()) {
        if (!e[xi]) {
          divisible = false;
          break;
        }
        Exponent m = e;
        --m[xi];
        q.add_term(m, coef);
      }
      if (!divisible) continue;
      BezoutCertificate cert{q * Scalar(-1 / c), std::vector<TateElement>(f.size(), TateElement(base))};
      cert.a[i] = TateElement::constant(base, Scalar(1 / c));
      certificate = std::move(cert);
    }
  }
  if (!certificate) throw Error("rational localization: no admissible strategy and no Bezout certificate for (f, g)");
  if (certificate->a.size() != f.size()) throw Error("rational localization: certificate has the wrong length");
  TateElement check = certificate->b.rebased(base) * gb - TateElement::constant(base, 1);
  for (std::size_t i = 0; i < f.size(); ++i) check += certificate->a[i].rebased(base) * f[i].rebased(base);
  if (!check.is_zero() && !a->normal_form(check, check.degree()).is_zero())
    throw Error("rational localization: certificate does not verify, b*g + sum a_i f_i - 1 = " + check.str());

  auto nm = default_names(*base, "T", f.size(), names);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < f.size(); ++i) vars.push_back({nm[i], r[i]});
  auto e = extend(a, vars, [&](const PolyradiusPtr& amb) {
    std::vector<TateElement> out;
    TateElement ga = g.rebased(amb);
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(ga * TateElement::variable(amb, nm[i]) - f[i].rebased(amb));
    return out;
  }, ExtensionKind::Rational);
  std::vector<DomainCondition> dom;
  for (std::size_t i = 0; i < f.size(); ++i) dom.push_back({f[i].rebased(base), gb, r[i]});
  e.domain = std::move(dom);
  certificate->b = certificate->b.rebased(base);
  for (auto& x : certificate->a) x = x.rebased(base);
  e.certificate = std::move(certificate);
  return e;
}

AlgebraExtension quotient(const AlgebraPtr& a, const std::vector<TateElement>& relations) {
  return extend(a, {}, [&](const PolyradiusPtr& amb) {
    std::vector<TateElement> out;
    for (const auto& r : relations) out.push_back(r.rebased(amb));
    return out;
  }, ExtensionKind::Quotient);
}

AlgebraExtension free_extension(const AlgebraPtr& a, const std::vector<Variable>& variables) {
  return extend(a, variables, [](const PolyradiusPtr&) { return std::vector<TateElement>{}; }, ExtensionKind::Free);
}

AlgebraExtension compose(const AlgebraExtension& first, const AlgebraExtension& second) {
  if (first.target() != second.base() &&
      !(*first.target()->ambient() == *second.base()->ambient() &&
        first.target()->relations() == second.base()->relations()))
    throw Error("compose: extensions do not chain");
  AlgebraExtension e;
  e.map = compose(second.map, first.map);
  const PolyradiusPtr& tgt = second.target()->ambient();
  for (const auto& name : first.new_variables) {
    TateElement img = second.map.apply(TateElement::variable(second.base()->ambient(), name));
    e.new_variables.push_back(format_monomial(*tgt, img.terms().begin()->first));
  }
  for (const auto& name : second.new_variables) e.new_variables.push_back(name);
  for (const auto& r : first.relators) e.relators.push_back(second.map.apply(r));
  for (const auto& r : second.relators) e.relators.push_back(r);
  e.kind = ExtensionKind::Composite;
  if (first.domain && second.kind == ExtensionKind::Identity) e.domain = first.domain;
  return e;
}

namespace {

std::vector<DomainCondition> pull_domain(const std::vector<DomainCondition>& dom, const AlgebraMap& m) {
  std::vector<DomainCondition> out;
  for (const auto& c : dom) out.push_back({m.apply(c.f), m.apply(c.g), c.r});
  return out;
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (*a->ambient() == *b->ambient() && a->relations() == b->relations() && a->field() == b->field());
}

}  // namespace

TensorProduct tensor_over(const AlgebraExtension& b, const AlgebraExtension& c) {
  if (!same_algebra(b.base(), c.base())) throw Error("tensor_over: structure maps have different sources");
  const AlgebraPtr& B = b.target();
  const AlgebraPtr& C = c.target();
  const Polyradius& bamb = *B->ambient();
  const Polyradius& camb = *C->ambient();
  const Polyradius& aamb = *b.base()->ambient();

  // Which C variables are images of base variables.
  std::map<std::string, std::size_t> c_from_base;
  for (std::size_t i = 0; i < aamb.size(); ++i) {
    const auto& img = c.map.images[i];
    if (img.terms().size() != 1 || img.degree() != 1 || img.terms().begin()->second != 1)
      throw Error("tensor_over: structure map must send variables to variables");
    c_from_base.emplace(format_monomial(camb, img.terms().begin()->first), i);
  }

  std::vector<Variable> vars = bamb.variables();
  std::map<std::string, std::string> c_rename;
  for (const auto& v : camb.variables()) {
    if (c_from_base.count(v.name)) continue;
    std::string name = fresh_name(Polyradius(vars), v.name);
    vars.push_back({name, v.radius});
    c_rename.emplace(v.name, name);
  }
  auto amb = make_polyradius(vars);

  // Provisional target to build maps; relations filled below.
  auto shell = AffinoidPresentation::make(B->field(), amb);
  AlgebraMap from_b = AlgebraMap::by_name(B, shell);
  AlgebraMap from_c{C, shell, {}};
  for (const auto& v : camb.variables()) {
    auto it = c_from_base.find(v.name);
    if (it != c_from_base.end()) from_c.images.push_back(from_b.apply(b.map.images[it->second]));
    else from_c.images.push_back(TateElement::variable(amb, c_rename.at(v.name)));
  }

  std::vector<TateElement> rels;
  for (const auto& r : B->relations()) push_unique(rels, from_b.apply(r));
  std::vector<TateElement> c_relators;
  for (const auto& r : c.relators) {
    TateElement m = from_c.apply(r);
    c_relators.push_back(m);
    push_unique(rels, std::move(m));
  }
  auto P = AffinoidPresentation::make(B->field(), amb, std::move(rels));
  from_b.target = P;
  from_c.target = P;

  TensorProduct t;
  t.algebra = P;

  t.over_first.map = from_b;
  for (const auto& v : camb.variables())
    if (!c_from_base.count(v.name)) t.over_first.new_variables.push_back(c_rename.at(v.name));
  t.over_first.relators = c_relators;
  t.over_first.kind = c.kind;
  if (c.domain) t.over_first.domain = pull_domain(*c.domain, b.map);
  if (c.certificate) {
    BezoutCertificate cert{b.map.apply(c.certificate->b), {}};
    for (const auto& x : c.certificate->a) cert.a.push_back(b.map.apply(x));
    t.over_first.certificate = std::move(cert);
  }

  t.over_second.map = from_c;
  t.over_second.new_variables = b.new_variables;
  for (const auto& r : b.relators) t.over_second.relators.push_back(from_b.apply(r));
  t.over_second.kind = b.kind;
  if (b.domain) t.over_second.domain = pull_domain(*b.domain, c.map);
  if (b.certificate) {
    BezoutCertificate cert{c.map.apply(b.certificate->b), {}};
    for (const auto& x : b.certificate->a) cert.a.push_back(c.map.apply(x));
    t.over_second.certificate = std::move(cert);
  }

  t.over_base.map = compose(from_b, b.map);
  t.over_base.new_variables = b.new_variables;
  for (const auto& n : t.over_first.new_variables) t.over_base.new_variables.push_back(n);
  t.over_base.relators = t.over_second.relators;
  for (const auto& r : c_relators) t.over_base.relators.push_back(r);
  t.over_base.kind = ExtensionKind::Tensor;
  if (b.domain && c.domain) {
    std::vector<DomainCondition> dom = *b.domain;
    dom.insert(dom.end(), c.domain->begin(), c.domain->end());
    t.over_base.domain = std::move(dom);
  }
  return t;
}

}  // namespace afnd
