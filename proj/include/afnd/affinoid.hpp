#pragma once

// Affinoid algebras k{r^-1 x}/I given by finite presentations, their
// localizations, pushouts, and truncated normal forms.

#include "afnd/scalar.hpp"
#include "afnd/tate.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace afnd {

enum class Strategy { Substitution, CoordinateInverse, GenericBounded };

std::string to_string(Strategy s);

/// b*g + sum a_i f_i = 1.
struct BezoutCertificate {
  TateElement b;
  std::vector<TateElement> a;
};

struct ReducedForm {
  TateElement representative;
  NormValue residue_norm_upper;
  unsigned truncation = 0;
};

/// u * v = c for distinct variables u, v.
struct InversePair {
  std::size_t u = 0, v = 0;
  Scalar c;
};

class AffinoidPresentation;
using AlgebraPtr = std::shared_ptr<const AffinoidPresentation>;

/// A = k{r^-1 x}/(relations).
///
/// On construction the relations are analysed once:
///  * relations c*v + h' with v absent from h' and ||h'/c|| <= r_v eliminate
///    v by the isometric substitution v -> -h'/c;
///  * a relation whose constant term strictly dominates the rest is a unit,
///    and the algebra is zero;
///  * relations u*v = c and u*v' = c' give v' = (c'/c) v;
///  * disjoint pairs u*v = c left over give Laurent normal forms.
/// Whatever remains is reduced by norm-aware elimination against relation
/// multiples of bounded degree (the generic strategy).
class AffinoidPresentation {
 public:
  AffinoidPresentation(FieldSpec field, PolyradiusPtr ambient, std::vector<TateElement> relations);

  static AlgebraPtr make(FieldSpec field, PolyradiusPtr ambient, std::vector<TateElement> relations = {});

  const FieldSpec& field() const { return field_; }
  const PolyradiusPtr& ambient() const { return ambient_; }
  const std::vector<TateElement>& relations() const { return relations_; }
  Strategy strategy() const;
  /// True when the relations were found to generate the unit ideal.
  bool is_zero() const;
  std::optional<std::string> zero_reason() const;

  /// Image of each eliminated variable in the remaining ones.
  std::map<std::size_t, TateElement> substitutions() const;
  std::vector<InversePair> inverse_pairs() const;
  /// Relations handled by the generic strategy, after substitution.
  std::vector<TateElement> residual_relations() const;
  /// Variables not eliminated by substitution.
  std::vector<std::size_t> free_variables() const;
  unsigned max_relation_degree() const;

  TateElement parse(std::string_view text) const { return parse_element(ambient_, text); }

  /// Canonical representative of w. Exact strategies ignore `level`; the
  /// generic strategy reduces against relation multiples of degree <= level
  /// and requires level >= deg w after substitution (it is raised if needed).
  TateElement normal_form(const TateElement& w, unsigned level) const;
  ReducedForm reduce(const TateElement& w, unsigned D) const;
  /// Monomials of degree <= D whose classes form the truncated basis, in
  /// ascending grevlex; they are their own normal forms at `level`.
  std::vector<Exponent> normal_monomials(unsigned D, unsigned level) const;
  /// For the generic strategy: whether 1 reduces to 0 at `level`.
  bool is_zero_at(unsigned level) const;

  std::string str() const;

 private:
  struct Analysis;

  FieldSpec field_;
  PolyradiusPtr ambient_;
  std::vector<TateElement> relations_;
  std::shared_ptr<Analysis> analysis_;
};

/// A ring map between presentations, given by the images of the source
/// variables in the target ambient.
struct AlgebraMap {
  AlgebraPtr source;
  AlgebraPtr target;
  std::vector<TateElement> images;

  /// Rewrites an element of the source ambient in the target ambient.
  TateElement apply(const TateElement& w) const;
  /// Sends each source variable to the target variable of the same name.
  static AlgebraMap by_name(AlgebraPtr source, AlgebraPtr target);
  static AlgebraMap identity(AlgebraPtr a) { return by_name(a, a); }
  /// Each source relation maps into the target ideal at the given level.
  bool is_well_defined(unsigned level) const;
};

AlgebraMap compose(const AlgebraMap& second, const AlgebraMap& first);

enum class ExtensionKind { Identity, Weierstrass, Laurent, Rational, Quotient, Free, Tensor, Composite };

std::string to_string(ExtensionKind k);

/// |f| <= r |g| on points of the base.
struct DomainCondition {
  TateElement f;
  TateElement g;
  NormValue r;
};

/// target = base{new variables}/(relators), with the structure map sending
/// base variables to distinct target variables.
struct AlgebraExtension {
  AlgebraMap map;
  std::vector<std::string> new_variables;
  std::vector<TateElement> relators;  // in the target ambient
  ExtensionKind kind = ExtensionKind::Identity;
  /// Rational-domain data in the base ambient, for localizations.
  std::optional<std::vector<DomainCondition>> domain;
  std::optional<BezoutCertificate> certificate;

  const AlgebraPtr& base() const { return map.source; }
  const AlgebraPtr& target() const { return map.target; }
  /// base{new variables} without the relators, over the target ambient.
  AlgebraPtr free_level() const;
  bool is_localization() const;
};

AlgebraExtension identity_extension(const AlgebraPtr& a);

/// A{r^-1 T}/(T_i - f_i).
AlgebraExtension weierstrass(const AlgebraPtr& a, const std::vector<TateElement>& f, const std::vector<NormValue>& r,
                             const std::vector<std::string>& names = {});

/// A{p^-1 T, q^-1 S}/(T_i - f_i, g_j S_j - 1): the domain |f_i| <= p_i,
/// |g_j| >= 1/q_j.
AlgebraExtension laurent(const AlgebraPtr& a, const std::vector<TateElement>& f, const std::vector<NormValue>& p,
                         const std::vector<TateElement>& g, const std::vector<NormValue>& q,
                         const std::vector<std::string>& t_names = {}, const std::vector<std::string>& s_names = {});

/// A{r^-1 T}/(g T_i - f_i) for the domain |f_i| <= r_i |g|. Needs g = 1, or
/// g a variable with some f_i of nonzero constant term, or a certificate.
AlgebraExtension rational(const AlgebraPtr& a, const std::vector<TateElement>& f, const TateElement& g,
                          const std::vector<NormValue>& r, std::optional<BezoutCertificate> certificate = {},
                          const std::vector<std::string>& names = {});

AlgebraExtension quotient(const AlgebraPtr& a, const std::vector<TateElement>& relations);

AlgebraExtension free_extension(const AlgebraPtr& a, const std::vector<Variable>& variables);

/// A -> B -> C as one extension A -> C.
AlgebraExtension compose(const AlgebraExtension& first, const AlgebraExtension& second);

struct TensorProduct {
  AlgebraPtr algebra;
  /// B -> B (x)_A C and C -> B (x)_A C as extensions.
  AlgebraExtension over_first;
  AlgebraExtension over_second;
  /// A -> B (x)_A C.
  AlgebraExtension over_base;
};

/// Pushout of B <- A -> C: B's variables followed by C's new variables
/// (primed on collision), relations B's together with C's relators.
TensorProduct tensor_over(const AlgebraExtension& b, const AlgebraExtension& c);

}  // namespace afnd
