#pragma once

// Tate algebras k{r_1^-1 x_1, ..., r_n^-1 x_n}, represented by their dense
// subring of polynomials.

#include "afnd/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace afnd {

struct Variable {
  std::string name;
  NormValue radius;
  bool operator==(const Variable&) const = default;
};

class Polyradius {
 public:
  Polyradius() = default;
  explicit Polyradius(std::vector<Variable> vars);

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require(std::string_view name) const;
  std::string str() const;

  bool operator==(const Polyradius&) const = default;

 private:
  std::vector<Variable> vars_;
};

using PolyradiusPtr = std::shared_ptr<const Polyradius>;

PolyradiusPtr make_polyradius(std::vector<Variable> vars);

using Exponent = std::vector<std::uint32_t>;

unsigned total_degree(const Exponent& e);

/// Graded reverse lexicographic order: -1, 0, +1.
int grevlex_compare(const Exponent& a, const Exponent& b);

struct GrevlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const { return grevlex_compare(a, b) > 0; }
};

/// A polynomial representative of an element of a Tate algebra. Terms are
/// kept in descending grevlex order and never store zero coefficients.
class TateElement {
 public:
  using Terms = std::map<Exponent, Scalar, GrevlexGreater>;

  explicit TateElement(PolyradiusPtr ambient);
  static TateElement constant(PolyradiusPtr ambient, const Scalar& c);
  static TateElement variable(PolyradiusPtr ambient, std::string_view name);
  static TateElement monomial(PolyradiusPtr ambient, Exponent e, const Scalar& c = 1);

  const PolyradiusPtr& ambient() const { return ambient_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  Scalar coefficient(const Exponent& e) const;
  /// Total degree; 0 for the zero element.
  unsigned degree() const;
  /// True when variable i occurs in some term.
  bool uses(std::size_t i) const;

  void add_term(const Exponent& e, const Scalar& c);

  TateElement& operator+=(const TateElement& g);
  TateElement& operator-=(const TateElement& g);
  TateElement& operator*=(const Scalar& c);
  friend TateElement operator+(TateElement f, const TateElement& g) { return f += g; }
  friend TateElement operator-(TateElement f, const TateElement& g) { return f -= g; }
  friend TateElement operator*(TateElement f, const Scalar& c) { return f *= c; }
  friend TateElement operator*(const TateElement& f, const TateElement& g);
  TateElement operator-() const { return *this * Scalar(-1); }

  /// Multiplies by the monomial x^e.
  TateElement shifted(const Exponent& e) const;
  TateElement pow(unsigned n) const;

  /// Replaces variable i by images[i] (all in a common target ambient).
  TateElement substitute(const std::vector<TateElement>& images) const;
  /// Re-expresses the element over another ambient by variable names.
  TateElement rebased(const PolyradiusPtr& target) const;

  friend bool operator==(const TateElement& f, const TateElement& g);

  std::string str() const;

 private:
  void check_same_ambient(const TateElement& g) const;

  PolyradiusPtr ambient_;
  Terms terms_;
};

std::string format_monomial(const Polyradius& ambient, const Exponent& e);

/// r^I for the ambient radii.
NormValue monomial_weight(const Polyradius& ambient, const Exponent& e);

NormValue gauss_norm(const FieldSpec& field, const TateElement& f);

TateElement multiply(const TateElement& f, const TateElement& g);

/// f(point); requires |point_i| <= r_i.
Scalar evaluate(const FieldSpec& field, const TateElement& f, const std::vector<Scalar>& point);

/// max |a_I| rho^I for 0 < rho_i <= r_i.
NormValue gauss_seminorm(const FieldSpec& field, const TateElement& f, const std::vector<NormValue>& rho);

/// Variables of `first` followed by those of `second`; colliding names in
/// `second` receive primes until unique.
PolyradiusPtr tensor_free(const Polyradius& first, const Polyradius& second);

/// Name not used in `ambient`, obtained from `base` by appending primes.
std::string fresh_name(const Polyradius& ambient, const std::string& base);

/// Exponents of length `nvars` supported on `support`, of total degree at
/// most D, in ascending grevlex order.
std::vector<Exponent> monomials_up_to(std::size_t nvars, const std::vector<std::size_t>& support, unsigned D);

/// Parses "5 + 3*x^2*y", "(x - 1)^2", "1/5*x" over the given ambient.
TateElement parse_element(const PolyradiusPtr& ambient, std::string_view text);

}  // namespace afnd
