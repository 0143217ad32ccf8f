#include "afnd/tate.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace afnd {

Polyradius::Polyradius(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::set<std::string> seen;
  for (const auto& v : vars_) {
    if (v.name.empty()) throw Error("empty variable name");
    if (!seen.insert(v.name).second) throw Error("duplicate variable name '" + v.name + "'");
    if (v.radius.is_zero()) throw Error("radius of '" + v.name + "' must be positive");
  }
}

std::optional<std::size_t> Polyradius::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Polyradius::require(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw Error("unknown variable '" + std::string(name) + "'");
  return *i;
}

std::string Polyradius::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) out += ", ";
    out += vars_[i].name + ":" + vars_[i].radius.str();
  }
  return out + "}";
}

PolyradiusPtr make_polyradius(std::vector<Variable> vars) {
  return std::make_shared<const Polyradius>(std::move(vars));
}

unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

int grevlex_compare(const Exponent& a, const Exponent& b) {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

TateElement::TateElement(PolyradiusPtr ambient) : ambient_(std::move(ambient)) {
  if (!ambient_) throw Error("null ambient");
}

TateElement TateElement::constant(PolyradiusPtr ambient, const Scalar& c) {
  TateElement f(std::move(ambient));
  f.add_term(Exponent(f.ambient_->size(), 0), c);
  return f;
}

TateElement TateElement::variable(PolyradiusPtr ambient, std::string_view name) {
  TateElement f(std::move(ambient));
  Exponent e(f.ambient_->size(), 0);
  e[f.ambient_->require(name)] = 1;
  f.add_term(e, 1);
  return f;
}

TateElement TateElement::monomial(PolyradiusPtr ambient, Exponent e, const Scalar& c) {
  TateElement f(std::move(ambient));
  if (e.size() != f.ambient_->size()) throw Error("exponent length does not match ambient");
  f.add_term(e, c);
  return f;
}

bool TateElement::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Scalar TateElement::constant_term() const { return coefficient(Exponent(ambient_->size(), 0)); }

Scalar TateElement::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

unsigned TateElement::degree() const { return terms_.empty() ? 0 : total_degree(terms_.begin()->first); }

bool TateElement::uses(std::size_t i) const {
  for (const auto& [e, c] : terms_)
    if (e[i]) return true;
  return false;
}

void TateElement::add_term(const Exponent& e, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void TateElement::check_same_ambient(const TateElement& g) const {
  if (ambient_ != g.ambient_ && !(*ambient_ == *g.ambient_)) throw Error("ambient polyradius mismatch");
}

TateElement& TateElement::operator+=(const TateElement& g) {
  check_same_ambient(g);
  for (const auto& [e, c] : g.terms_) add_term(e, c);
  return *this;
}

TateElement& TateElement::operator-=(const TateElement& g) {
  check_same_ambient(g);
  for (const auto& [e, c] : g.terms_) add_term(e, -c);
  return *this;
}

TateElement& TateElement::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, x] : terms_) x *= c;
  return *this;
}

TateElement operator*(const TateElement& f, const TateElement& g) {
  f.check_same_ambient(g);
  TateElement out(f.ambient_);
  const std::size_t n = f.ambient_->size();
  Exponent e(n);
  for (const auto& [a, x] : f.terms_)
    for (const auto& [b, y] : g.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = a[i] + b[i];
      out.add_term(e, x * y);
    }
  return out;
}

TateElement TateElement::shifted(const Exponent& s) const {
  TateElement out(ambient_);
  for (const auto& [e, c] : terms_) {
    Exponent m = e;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += s[i];
    out.terms_.emplace_hint(out.terms_.end(), std::move(m), c);
  }
  return out;
}

TateElement TateElement::pow(unsigned n) const {
  TateElement result = constant(ambient_, 1);
  TateElement base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

TateElement TateElement::substitute(const std::vector<TateElement>& images) const {
  if (images.size() != ambient_->size()) throw Error("substitution needs one image per variable");
  if (images.empty()) {
    throw Error("substitution over an empty ambient needs a target ambient");
  }
  const PolyradiusPtr& target = images.front().ambient();
  TateElement out(target);
  // powers[i][k] = images[i]^k, filled on demand
  std::vector<std::vector<TateElement>> powers(images.size());
  auto power = [&](std::size_t i, unsigned k) -> const TateElement& {
    auto& p = powers[i];
    if (p.empty()) p.push_back(constant(target, 1));
    while (p.size() <= k) p.push_back(p.back() * images[i]);
    return p[k];
  };
  for (const auto& [e, c] : terms_) {
    TateElement t = constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t = t * power(i, e[i]);
    out += t;
  }
  return out;
}

TateElement TateElement::rebased(const PolyradiusPtr& target) const {
  if (target == ambient_ || *target == *ambient_) {
    TateElement out = *this;
    out.ambient_ = target;
    return out;
  }
  std::vector<std::size_t> map(ambient_->size());
  for (std::size_t i = 0; i < ambient_->size(); ++i) map[i] = target->require((*ambient_)[i].name);
  TateElement out(target);
  for (const auto& [e, c] : terms_) {
    Exponent m(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) m[map[i]] += e[i];
    out.add_term(m, c);
  }
  return out;
}

bool operator==(const TateElement& f, const TateElement& g) {
  return (f.ambient_ == g.ambient_ || *f.ambient_ == *g.ambient_) && f.terms_ == g.terms_;
}

std::string format_monomial(const Polyradius& ambient, const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!out.empty()) out += '*';
    out += ambient[i].name;
    if (e[i] > 1) out += '^' + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

std::string TateElement::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool neg = c < 0;
    Scalar a = neg ? Scalar(-c) : c;
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    const bool unit = total_degree(e) == 0;
    if (unit) out += a.get_str();
    else if (a == 1) out += format_monomial(*ambient_, e);
    else out += a.get_str() + "*" + format_monomial(*ambient_, e);
  }
  return out;
}

// ---------------------------------------------------------------------------

NormValue monomial_weight(const Polyradius& ambient, const Exponent& e) {
  NormValue w;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) w *= ambient[i].radius.pow(Scalar(e[i]));
  return w;
}

NormValue gauss_norm(const FieldSpec& field, const TateElement& f) {
  NormValue best = NormValue::zero();
  for (const auto& [e, c] : f.terms()) best = max(best, norm(field, c) * monomial_weight(*f.ambient(), e));
  return best;
}

TateElement multiply(const TateElement& f, const TateElement& g) { return f * g; }

Scalar evaluate(const FieldSpec& field, const TateElement& f, const std::vector<Scalar>& point) {
  const Polyradius& amb = *f.ambient();
  if (point.size() != amb.size()) throw Error("evaluation point has wrong dimension");
  for (std::size_t i = 0; i < point.size(); ++i)
    if (compare(norm(field, point[i]), amb[i].radius) > 0)
      throw Error("point outside polydisc: |" + amb[i].name + "| exceeds " + amb[i].radius.str());
  Scalar sum = 0;
  for (const auto& [e, c] : f.terms()) {
    Scalar t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      mpq_class p;
      mpz_pow_ui(p.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
      mpz_pow_ui(p.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
      t *= p;
    }
    sum += t;
  }
  return sum;
}

NormValue gauss_seminorm(const FieldSpec& field, const TateElement& f, const std::vector<NormValue>& rho) {
  const Polyradius& amb = *f.ambient();
  if (rho.size() != amb.size()) throw Error("radius vector has wrong dimension");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i].is_zero()) throw Error("Gauss point radii must be positive");
    if (compare(rho[i], amb[i].radius) > 0)
      throw Error("Gauss radius for '" + amb[i].name + "' exceeds the ambient radius");
  }
  NormValue best = NormValue::zero();
  for (const auto& [e, c] : f.terms()) {
    NormValue w = norm(field, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) w *= rho[i].pow(Scalar(e[i]));
    best = max(best, w);
  }
  return best;
}

std::string fresh_name(const Polyradius& ambient, const std::string& base) {
  std::string name = base;
  while (ambient.index_of(name)) name += '\'';
  return name;
}

PolyradiusPtr tensor_free(const Polyradius& first, const Polyradius& second) {
  std::vector<Variable> vars = first.variables();
  for (const auto& v : second.variables()) {
    Polyradius so_far(vars);
    vars.push_back({fresh_name(so_far, v.name), v.radius});
  }
  return make_polyradius(std::move(vars));
}

std::vector<Exponent> monomials_up_to(std::size_t nvars, const std::vector<std::size_t>& support, unsigned D) {
  std::vector<Exponent> out;
  Exponent e(nvars, 0);
  auto rec = [&](auto&& self, std::size_t k, unsigned left) -> void {
    if (k == support.size()) {
      out.push_back(e);
      return;
    }
    for (unsigned d = 0; d <= left; ++d) {
      e[support[k]] = d;
      self(self, k + 1, left - d);
    }
    e[support[k]] = 0;
  };
  rec(rec, 0, D);
  std::sort(out.begin(), out.end(), [](const Exponent& a, const Exponent& b) { return grevlex_compare(a, b) < 0; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ElementParser {
 public:
  ElementParser(const PolyradiusPtr& ambient, std::string_view text) : amb_(ambient), s_(text) {}

  TateElement parse() {
    TateElement f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("element '" + std::string(s_) + "': " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  TateElement expr() {
    TateElement f = term();
    for (;;) {
      if (eat('+')) f += term();
      else if (eat('-')) f -= term();
      else return f;
    }
  }
  TateElement term() {
    TateElement f = unary();
    for (;;) {
      if (eat('*')) {
        f = f * unary();
      } else if (eat('/')) {
        TateElement d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        f *= Scalar(1 / d.constant_term());
      } else {
        return f;
      }
    }
  }
  TateElement unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  TateElement power() {
    TateElement base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      unsigned long n = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (n > 10000) fail("exponent too large");
      return base.pow(static_cast<unsigned>(n));
    }
    return base;
  }
  TateElement atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      TateElement f = expr();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return TateElement::constant(amb_, Scalar(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!amb_->index_of(name)) fail("unknown variable '" + name + "'");
      return TateElement::variable(amb_, name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const PolyradiusPtr& amb_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

TateElement parse_element(const PolyradiusPtr& ambient, std::string_view text) {
  return ElementParser(ambient, text).parse();
}

}  // namespace afnd
