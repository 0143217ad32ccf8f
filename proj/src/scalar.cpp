#include "afnd/scalar.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace afnd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<NormValue::Factor> factor_integer(mpz_class n) {
  std::vector<NormValue::Factor> out;
  if (n < 0) n = -n;
  for (std::uint64_t p = 2; n > 1; ++p) {
    if (mpz_class(p) * p > n) {
      if (!n.fits_ulong_p()) throw Error("cannot factor norm value base " + n.get_str());
      out.emplace_back(n.get_ui(), Scalar(1));
      break;
    }
    long e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, Scalar(e));
    if (p > 1000000) throw Error("norm value base has a large prime factor");
  }
  return out;
}

// Merge of two sorted factor lists with exponents combined by `sign`.
std::vector<NormValue::Factor> merge(const std::vector<NormValue::Factor>& a,
                                     const std::vector<NormValue::Factor>& b, int sign) {
  std::vector<NormValue::Factor> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Scalar(-b[j].second));
      ++j;
    } else {
      Scalar e = sign > 0 ? Scalar(a[i].second + b[j].second) : Scalar(a[i].second - b[j].second);
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

thread_local unsigned g_last_precision = 0;

// Outward-rounded enclosure of sum e * log p.
void log_enclosure(const std::vector<NormValue::Factor>& fs, mpfr_t lo, mpfr_t hi, mpfr_prec_t prec) {
  mpfr_t l, h, t;
  mpfr_inits2(prec, l, h, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (const auto& [p, e] : fs) {
    mpfr_set_ui(t, p, MPFR_RNDN);  // exact: p < 2^64 fits in prec >= 64
    mpfr_log(l, t, MPFR_RNDD);
    mpfr_log(h, t, MPFR_RNDU);
    const bool pos = sgn(e) > 0;
    // term = e * log p; choose the endpoint that keeps the enclosure outward
    mpfr_t tl, th;
    mpfr_inits2(prec, tl, th, static_cast<mpfr_ptr>(nullptr));
    if (pos) {
      mpfr_mul_z(tl, l, e.get_num_mpz_t(), MPFR_RNDD);
      mpfr_div_z(tl, tl, e.get_den_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(th, h, e.get_num_mpz_t(), MPFR_RNDU);
      mpfr_div_z(th, th, e.get_den_mpz_t(), MPFR_RNDU);
    } else {
      mpfr_mul_z(tl, h, e.get_num_mpz_t(), MPFR_RNDD);
      mpfr_div_z(tl, tl, e.get_den_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(th, l, e.get_num_mpz_t(), MPFR_RNDU);
      mpfr_div_z(th, th, e.get_den_mpz_t(), MPFR_RNDU);
    }
    mpfr_add(lo, lo, tl, MPFR_RNDD);
    mpfr_add(hi, hi, th, MPFR_RNDU);
    mpfr_clears(tl, th, static_cast<mpfr_ptr>(nullptr));
  }
  mpfr_clears(l, h, t, static_cast<mpfr_ptr>(nullptr));
}

std::strong_ordering certified_compare(const std::vector<NormValue::Factor>& a,
                                       const std::vector<NormValue::Factor>& b) {
  for (mpfr_prec_t prec = 64; prec <= (1 << 22); prec *= 2) {
    mpfr_t alo, ahi, blo, bhi;
    mpfr_inits2(prec, alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
    log_enclosure(a, alo, ahi, prec);
    log_enclosure(b, blo, bhi, prec);
    std::strong_ordering r = std::strong_ordering::equal;
    bool decided = false;
    if (mpfr_less_p(ahi, blo)) {
      r = std::strong_ordering::less;
      decided = true;
    } else if (mpfr_greater_p(alo, bhi)) {
      r = std::strong_ordering::greater;
      decided = true;
    }
    mpfr_clears(alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
    if (decided) {
      g_last_precision = static_cast<unsigned>(prec);
      return r;
    }
  }
  throw Error("norm value comparison did not separate");
}

}  // namespace

std::string format_scalar(const Scalar& a) {
  Scalar c = a;
  c.canonicalize();
  return c.get_str();
}

Scalar parse_scalar(std::string_view text) {
  std::string s(trim(text));
  if (s.empty()) throw Error("empty scalar");
  Scalar q;
  if (q.set_str(s, 10) != 0) throw Error("malformed scalar '" + s + "'");
  if (q.get_den() == 0) throw Error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

FieldSpec FieldSpec::padic(std::uint64_t p) {
  if (!is_prime(p)) throw Error("p-adic field requires a prime, got " + std::to_string(p));
  return FieldSpec{Mode::PAdic, p};
}

std::string FieldSpec::str() const {
  return is_padic() ? "Q_" + std::to_string(prime) : std::string("Q (trivial norm)");
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  mpz_class z(std::to_string(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

long valuation(const Scalar& a, std::uint64_t p) {
  if (a == 0) throw Error("valuation of zero");
  mpz_class f(std::to_string(p)), rest;
  long v = static_cast<long>(mpz_remove(rest.get_mpz_t(), a.get_num_mpz_t(), f.get_mpz_t()));
  v -= static_cast<long>(mpz_remove(rest.get_mpz_t(), a.get_den_mpz_t(), f.get_mpz_t()));
  return v;
}

NormValue NormValue::zero() {
  NormValue z;
  z.zero_ = true;
  return z;
}

NormValue NormValue::prime_power(std::uint64_t p, const Scalar& exponent) {
  if (!is_prime(p)) throw Error("norm value base " + std::to_string(p) + " is not prime");
  NormValue v;
  Scalar e = exponent;
  e.canonicalize();
  if (e != 0) v.factors_.emplace_back(p, std::move(e));
  return v;
}

NormValue NormValue::from_rational(const Scalar& q) {
  if (q == 0) return zero();
  auto num = factor_integer(q.get_num());
  auto den = factor_integer(q.get_den());
  NormValue v;
  v.factors_ = merge(num, den, -1);
  return v;
}

NormValue NormValue::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error("empty norm value");
  if (s == "0") return zero();
  NormValue out;
  while (!s.empty()) {
    auto star = s.find('*');
    std::string_view tok = trim(s.substr(0, star));
    s = star == std::string_view::npos ? std::string_view{} : s.substr(star + 1);
    if (tok.empty()) throw Error("malformed norm value '" + std::string(text) + "'");
    auto caret = tok.find('^');
    if (caret == std::string_view::npos) {
      Scalar q = parse_scalar(tok);
      if (q <= 0) throw Error("norm value factors must be positive in '" + std::string(text) + "'");
      out *= from_rational(q);
    } else {
      Scalar base = parse_scalar(tok.substr(0, caret));
      Scalar e = parse_scalar(tok.substr(caret + 1));
      if (base <= 0) throw Error("norm value base must be positive in '" + std::string(text) + "'");
      out *= from_rational(base).pow(e);
    }
  }
  return out;
}

Scalar NormValue::exponent(std::uint64_t p) const {
  for (const auto& [q, e] : factors_)
    if (q == p) return e;
  return 0;
}

NormValue NormValue::inverse() const {
  if (zero_) throw Error("inverse of zero norm value");
  NormValue v;
  v.factors_.reserve(factors_.size());
  for (const auto& [p, e] : factors_) v.factors_.emplace_back(p, -e);
  return v;
}

NormValue NormValue::pow(const Scalar& e) const {
  if (zero_) {
    if (e <= 0) throw Error("nonpositive power of zero norm value");
    return zero();
  }
  NormValue v;
  if (e == 0) return v;
  for (const auto& [p, x] : factors_) v.factors_.emplace_back(p, x * e);
  return v;
}

NormValue operator*(const NormValue& a, const NormValue& b) {
  if (a.zero_ || b.zero_) return NormValue::zero();
  if (b.factors_.empty()) return a;
  if (a.factors_.empty()) return b;
  NormValue v;
  v.factors_ = merge(a.factors_, b.factors_, +1);
  return v;
}

NormValue operator/(const NormValue& a, const NormValue& b) {
  if (b.zero_) throw Error("division by zero norm value");
  if (a.zero_) return NormValue::zero();
  NormValue v;
  v.factors_ = merge(a.factors_, b.factors_, -1);
  return v;
}

bool operator==(const NormValue& a, const NormValue& b) {
  return a.zero_ == b.zero_ && a.factors_ == b.factors_;
}

std::strong_ordering compare(const NormValue& a, const NormValue& b) {
  g_last_precision = 0;
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
    return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.factors() == b.factors()) return std::strong_ordering::equal;
  // Single common prime (or one side trivial): compare exponents exactly.
  std::uint64_t p = 0;
  bool single = true;
  for (const auto* fs : {&a.factors(), &b.factors()}) {
    if (fs->size() > 1) single = false;
    for (const auto& f : *fs) {
      if (p == 0) p = f.first;
      else if (p != f.first) single = false;
    }
  }
  if (single) {
    int c = cmp(a.exponent(p), b.exponent(p));
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return certified_compare(a.factors(), b.factors());
}

std::strong_ordering operator<=>(const NormValue& a, const NormValue& b) { return compare(a, b); }

unsigned last_comparison_precision() { return g_last_precision; }

const NormValue& max(const NormValue& a, const NormValue& b) { return compare(a, b) < 0 ? b : a; }

std::string NormValue::str() const {
  if (zero_) return "0";
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : factors_) {
    if (!out.empty()) out += '*';
    out += std::to_string(p) + '^' + e.get_str();
  }
  return out;
}

double NormValue::approx() const {
  if (zero_) return 0.0;
  double l = 0.0;
  for (const auto& [p, e] : factors_) l += e.get_d() * std::log(static_cast<double>(p));
  return std::exp(l);
}

NormValue norm(const FieldSpec& spec, const Scalar& a) {
  if (a == 0) return NormValue::zero();
  if (!spec.is_padic()) return NormValue::one();
  long v = valuation(a, spec.prime);
  if (v == 0) return NormValue::one();
  NormValue r;
  r.factors_.emplace_back(spec.prime, Scalar(-v));
  return r;
}

}  // namespace afnd
