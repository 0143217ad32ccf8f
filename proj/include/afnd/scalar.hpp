#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace afnd {

/// Raised for malformed input, violated preconditions and unsupported shapes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Scalar = mpq_class;

std::string format_scalar(const Scalar& a);
Scalar parse_scalar(std::string_view text);

/// The base valued field: Q with the p-adic absolute value, or Q with the
/// trivial absolute value |a| = 1 for a != 0.
struct FieldSpec {
  enum class Mode { PAdic, Trivial };

  Mode mode = Mode::Trivial;
  std::uint64_t prime = 0;

  static FieldSpec padic(std::uint64_t p);
  static FieldSpec trivial() { return {}; }

  bool is_padic() const { return mode == Mode::PAdic; }
  std::string str() const;
  bool operator==(const FieldSpec&) const = default;
};

bool is_prime(std::uint64_t n);

/// p-adic valuation of a nonzero rational.
long valuation(const Scalar& a, std::uint64_t p);

/// Exact positive real of the form prod p^e (p prime, e rational), or zero.
///
/// Factors are kept sorted by prime with no zero exponents, so equality of
/// values is equality of factor lists. Ordering compares the reals
/// sum e * log p; when more than one prime is involved the comparison is
/// certified by outward-rounded interval evaluation, refined until the
/// intervals separate.
class NormValue {
 public:
  using Factor = std::pair<std::uint64_t, Scalar>;

  NormValue() = default;  // the value 1

  static NormValue zero();
  static NormValue one() { return {}; }
  static NormValue prime_power(std::uint64_t p, const Scalar& exponent);
  /// The archimedean magnitude of a positive rational, factored into primes.
  static NormValue from_rational(const Scalar& q);
  /// Accepts "0", "1", "5^-2*2^1/3", plain rationals "3/2" and mixtures.
  static NormValue parse(std::string_view text);

  bool is_zero() const { return zero_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Exponent of p, zero if p does not occur.
  Scalar exponent(std::uint64_t p) const;

  NormValue inverse() const;
  NormValue pow(const Scalar& e) const;
  friend NormValue operator*(const NormValue& a, const NormValue& b);
  friend NormValue operator/(const NormValue& a, const NormValue& b);
  NormValue& operator*=(const NormValue& b) { return *this = *this * b; }

  friend bool operator==(const NormValue& a, const NormValue& b);
  friend std::strong_ordering operator<=>(const NormValue& a, const NormValue& b);

  std::string str() const;
  double approx() const;

 private:
  friend NormValue norm(const FieldSpec& spec, const Scalar& a);

  bool zero_ = false;
  std::vector<Factor> factors_;
};

std::strong_ordering compare(const NormValue& a, const NormValue& b);

/// Working precision (bits) reached by the most recent certified comparison on
/// this thread; 0 when the last comparison needed no interval arithmetic.
unsigned last_comparison_precision();

const NormValue& max(const NormValue& a, const NormValue& b);

/// |a| in the given field.
NormValue norm(const FieldSpec& spec, const Scalar& a);

}  // namespace afnd
