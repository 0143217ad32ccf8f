#include "afnd/scenario.hpp"

#include "afnd/cech.hpp"
#include "afnd/complexes.hpp"
#include "afnd/homotopy.hpp"
#include "afnd/spectrum.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace afnd {

using json = nlohmann::ordered_json;

ScenarioError::ScenarioError(const std::string& path, int line, int column, const std::string& message)
    : Error(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const ScenarioEntry* ScenarioBlock::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

bool is_passing_verdict(const std::string& verdict) {
  return verdict == "holds" || verdict == "covered" || verdict == "exact";
}

namespace {

const std::set<std::string> kBlockKinds{"algebra", "localize", "module", "cover", "samples", "check"};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '\''; }

// Leading/trailing blanks stripped; `col` moves to the first kept character.
std::string trim(std::string_view s, int& col) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  col += static_cast<int>(b);
  return std::string(s.substr(b, e - b));
}

std::string trim(std::string_view s) {
  int c = 0;
  return trim(s, c);
}

class Parser {
 public:
  Parser(const std::string& text, const std::string& path) : path_(path) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines_.push_back(line);
    scenario_.path = path;
  }

  Scenario run() {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      std::string raw = lines_[i];
      if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
      line_no_ = static_cast<int>(i) + 1;
      if (open_) {
        body_line(raw, 1);
        continue;
      }
      int col = 1;
      std::string t = trim(raw, col);
      if (t.empty()) continue;
      top_line(raw, t, col);
    }
    if (open_) error(open_->line, open_->column, "block '" + open_->name + "' is not closed");
    return std::move(scenario_);
  }

 private:
  [[noreturn]] void error(int line, int col, const std::string& msg) const { throw ScenarioError(path_, line, col, msg); }

  void top_line(const std::string& raw, const std::string& t, int col) {
    // split into words up to '{'
    std::size_t pos = 0;
    auto word = [&](int& wcol) {
      while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
      std::size_t b = pos;
      while (pos < t.size() && is_word_char(t[pos])) ++pos;
      wcol = col + static_cast<int>(b);
      return t.substr(b, pos - b);
    };
    int kcol = 0;
    std::string kind = word(kcol);
    if (kind.empty()) error(line_no_, kcol, "expected a directive or block, found '" + t.substr(0, 1) + "'");
    if (kind == "field") {
      int c = 0;
      std::string mode = word(c);
      if (mode == "trivial") {
        scenario_.field = FieldSpec::trivial();
      } else if (mode == "padic") {
        int pc = 0;
        std::string p = word(pc);
        try {
          std::size_t used = 0;
          unsigned long long v = std::stoull(p, &used);
          if (used != p.size()) throw Error("");
          scenario_.field = FieldSpec::padic(v);
        } catch (const std::exception&) {
          error(line_no_, pc, "expected a prime after 'padic', found '" + p + "'");
        }
      } else {
        error(line_no_, c, "field must be 'padic P' or 'trivial'");
      }
      if (scenario_.field_declared) error(line_no_, kcol, "field declared twice");
      scenario_.field_declared = true;
      expect_end(t, pos, col);
      return;
    }
    if (kind == "degree") {
      int c = 0;
      std::string d = word(c);
      scenario_.degree = parse_degree(d, line_no_, c);
      expect_end(t, pos, col);
      return;
    }
    if (!kBlockKinds.count(kind)) error(line_no_, kcol, "unknown block kind '" + kind + "'");
    int ncol = 0;
    std::string name = word(ncol);
    if (name.empty()) error(line_no_, ncol, "block '" + kind + "' needs a name");
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos >= t.size() || t[pos] != '{') error(line_no_, col + static_cast<int>(pos), "expected '{'");
    ScenarioBlock b;
    b.kind = kind == "module" ? "localize" : kind;
    b.name = name;
    b.line = line_no_;
    b.column = kcol;
    open_ = std::move(b);
    int rest_col = col + static_cast<int>(pos) + 1;
    // offset of t inside raw is col - 1
    body_line(raw.substr(static_cast<std::size_t>(rest_col - 1)), rest_col);
  }

  void expect_end(const std::string& t, std::size_t pos, int col) const {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos < t.size()) error(line_no_, col + static_cast<int>(pos), "unexpected '" + t.substr(pos) + "'");
  }

  void body_line(const std::string& text, int col) {
    std::string t = trim(text, col);
    bool close = false;
    if (!t.empty() && t.back() == '}') {
      close = true;
      t.pop_back();
      int c2 = col;
      t = trim(t, c2);
      col = c2;
    }
    if (!t.empty()) entry(t, col);
    if (close) {
      scenario_.blocks.push_back(std::move(*open_));
      open_.reset();
    }
  }

  void entry(const std::string& t, int col) {
    auto eq = t.find('=');
    if (eq == std::string::npos) error(line_no_, col, "expected 'key = value'");
    int kcol = col;
    std::string key = trim(std::string_view(t).substr(0, eq), kcol);
    if (key.empty()) error(line_no_, col, "missing key before '='");
    for (std::size_t i = 0; i < key.size(); ++i)
      if (!is_word_char(key[i])) error(line_no_, kcol + static_cast<int>(i), "invalid key '" + key + "'");
    int vcol = col + static_cast<int>(eq) + 1;
    std::string value = trim(std::string_view(t).substr(eq + 1), vcol);
    if (open_->find(key)) error(line_no_, kcol, "duplicate key '" + key + "' in block '" + open_->name + "'");
    open_->entries.push_back({key, value, line_no_, vcol, kcol});
  }

  unsigned parse_degree(const std::string& d, int line, int col) const {
    try {
      std::size_t used = 0;
      long v = std::stol(d, &used);
      if (used == d.size() && v >= 1 && v <= 10000) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    error(line, col, "degree must be a positive integer, found '" + d + "'");
  }

  std::string path_;
  std::vector<std::string> lines_;
  Scenario scenario_;
  std::optional<ScenarioBlock> open_;
  int line_no_ = 0;
};

struct Piece {
  std::string text;
  int line, column;
};

std::vector<Piece> split(const ScenarioEntry& e, char sep) {
  std::vector<Piece> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= e.value.size(); ++i) {
    if (i < e.value.size()) {
      if (e.value[i] == '(') ++depth;
      if (e.value[i] == ')') --depth;
      if (e.value[i] != sep || depth > 0) continue;
    }
    int col = e.column + static_cast<int>(start);
    std::string p = trim(std::string_view(e.value).substr(start, i - start), col);
    out.push_back({p, e.line, col});
    start = i + 1;
  }
  if (out.size() == 1 && out[0].text.empty()) out.clear();
  return out;
}

// Random corpus entries for property checks.
class Corpus {
 public:
  Corpus(std::uint64_t seed, FieldSpec field) : rng_(seed), field_(field) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  Scalar coefficient() {
    long a = static_cast<long>(below(19)) - 9;
    if (a == 0) a = 1;
    Scalar c(a, static_cast<long>(below(4) + 1));
    c.canonicalize();
    if (field_.is_padic()) {
      int k = static_cast<int>(below(5)) - 2;
      Scalar p(static_cast<unsigned long>(field_.prime));
      for (; k > 0; --k) c *= p;
      for (; k < 0; ++k) c /= p;
    }
    return c;
  }

  TateElement element(const PolyradiusPtr& amb, unsigned max_degree, std::size_t max_terms) {
    TateElement f(amb);
    std::size_t terms = 1 + below(max_terms);
    for (std::size_t t = 0; t < terms; ++t) {
      Exponent e(amb->size(), 0);
      unsigned d = static_cast<unsigned>(below(max_degree + 1));
      for (unsigned j = 0; j < d && !e.empty(); ++j) ++e[below(e.size())];
      f.add_term(e, coefficient());
    }
    if (f.is_zero()) f.add_term(Exponent(amb->size(), 0), 1);
    return f;
  }

 private:
  std::mt19937_64 rng_;
  FieldSpec field_;
};

json strings(const Cochain& c) {
  json a = json::array();
  for (const auto& x : c) a.push_back(x.str());
  return a;
}

json verdict_json(const MorphismVerdict& v) {
  json j;
  j["outcome"] = to_string(v.outcome);
  j["reason"] = v.reason;
  if (v.witness_degree) j["witness_degree"] = *v.witness_degree;
  if (v.witness_degree && v.witness_rank) j["witness_rank"] = v.witness_rank;
  if (v.witness) j["witness"] = strings(*v.witness);
  if (!v.homology.empty()) {
    json h = json::array();
    for (const auto& r : v.homology)
      h.push_back({{"degree", r.degree}, {"cycles", r.cycles}, {"boundaries", r.boundaries}, {"rank", r.rank}});
    j["homology"] = h;
  }
  return j;
}

class Runner {
 public:
  Runner(const Scenario& s, const RunOptions& o) : s_(s), opt_(o) {}

  RunResult run() {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& b : s_.blocks) {
      if (b.kind == "check") continue;
      if (names_.count(b.name)) fail(b.line, b.column, "name '" + b.name + "' is declared twice");
      names_.insert(b.name);
      if (b.kind == "algebra") declare_algebra(b);
      else if (b.kind == "localize") declare_extension(b);
      else if (b.kind == "cover") declare_cover(b);
      else if (b.kind == "samples") declare_samples(b);
    }
    std::set<std::string> check_names;
    std::vector<const ScenarioBlock*> checks;
    for (const auto& b : s_.blocks) {
      if (b.kind != "check") continue;
      if (!check_names.insert(b.name).second) fail(b.line, b.column, "check '" + b.name + "' is declared twice");
      const ScenarioEntry& k = require(b, "kind");
      static const std::set<std::string> kinds{"epi",   "hoepi",      "transversal", "cech",
                                               "cover", "norm-table", "property"};
      if (!kinds.count(k.value)) fail(k.line, k.column, "unknown check kind '" + k.value + "'");
      validate_check(b);
      checks.push_back(&b);
    }

    RunResult res;
    json list = json::array();
    bool stopped = false;
    std::size_t passed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const ScenarioBlock& b = *checks[i];
      const std::string kind = b.find("kind")->value;
      if (opt_.only_kind && *opt_.only_kind != kind) continue;
      auto c0 = std::chrono::steady_clock::now();
      json rec;
      rec["name"] = b.name;
      rec["kind"] = kind;
      const unsigned D = degree_for(b);
      rec["degree"] = D;
      std::string summary;
      run_check(b, kind, D, i, rec, summary);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
      if (opt_.timing) rec["seconds"] = secs;
      const std::string verdict = rec["verdict"];
      const bool ok = is_passing_verdict(verdict);
      passed += ok;
      res.all_passed = res.all_passed && ok;
      res.lines.push_back("[" + verdict + "] " + b.name + " (" + kind + ", D=" + std::to_string(D) + ")" +
                          (summary.empty() ? "" : ": " + summary));
      spdlog::info("check {} finished in {:.3f}s", b.name, secs);
      list.push_back(std::move(rec));
      if (!ok && opt_.fail_fast) {
        stopped = i + 1 < checks.size();
        break;
      }
    }
    json& r = res.report;
    r["scenario"] = s_.path;
    r["field"] = field().str();
    r["degree"] = global_degree();
    r["seed"] = opt_.seed;
    r["checks"] = std::move(list);
    r["summary"] = {{"checks", r["checks"].size()},
                    {"passed", passed},
                    {"failed", r["checks"].size() - passed},
                    {"all_passed", res.all_passed}};
    if (stopped) r["summary"]["stopped_early"] = true;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt_.timing) r["seconds"] = res.seconds;
    return res;
  }

 private:
  [[noreturn]] void fail(int line, int col, const std::string& msg) const {
    throw ScenarioError(s_.path, line, col, msg);
  }
  [[noreturn]] void fail(const Piece& p, const std::string& msg) const { fail(p.line, p.column, msg); }
  [[noreturn]] void fail(const ScenarioEntry& e, const std::string& msg) const { fail(e.line, e.column, msg); }

  const FieldSpec& field() const { return s_.field; }

  unsigned global_degree() const {
    if (opt_.degree) return *opt_.degree;
    return s_.degree.value_or(10);
  }

  unsigned degree_for(const ScenarioBlock& b) const {
    if (const auto* e = b.find("degree")) return positive(*e, 10000);
    return global_degree();
  }

  unsigned positive(const ScenarioEntry& e, unsigned max) const {
    try {
      std::size_t used = 0;
      long v = std::stol(e.value, &used);
      if (used == e.value.size() && v >= 1 && v <= static_cast<long>(max)) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    fail(e, "'" + e.key + "' must be an integer between 1 and " + std::to_string(max));
  }

  bool flag(const ScenarioBlock& b, const std::string& key, bool dflt) const {
    const auto* e = b.find(key);
    if (!e) return dflt;
    if (e->value == "true" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "no") return false;
    fail(*e, "'" + key + "' must be true or false");
  }

  const ScenarioEntry& require(const ScenarioBlock& b, const std::string& key) const {
    if (const auto* e = b.find(key)) return *e;
    fail(b.line, b.column, b.kind + " '" + b.name + "' needs '" + key + "'");
  }

  void allow_keys(const ScenarioBlock& b, const std::set<std::string>& keys) const {
    for (const auto& e : b.entries)
      if (!keys.count(e.key)) fail(e.line, e.key_column, "unknown key '" + e.key + "' in " + b.kind + " '" + b.name + "'");
  }

  void need_field(const ScenarioBlock& b) const {
    if (!s_.field_declared) fail(b.line, b.column, "no 'field' declared before " + b.kind + " '" + b.name + "'");
  }

  NormValue norm_value(const Piece& p) const {
    try {
      NormValue v = NormValue::parse(p.text);
      if (v.is_zero()) fail(p, "radius must be positive");
      return v;
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      fail(p, e.what());
    }
  }

  Scalar scalar(const Piece& p) const {
    try {
      return parse_scalar(p.text);
    } catch (const Error& e) {
      fail(p, e.what());
    }
  }

  TateElement element(const PolyradiusPtr& amb, const Piece& p) const {
    try {
      return parse_element(amb, p.text);
    } catch (const Error& e) {
      fail(p, e.what());
    }
  }

  std::vector<TateElement> elements(const ScenarioBlock& b, const std::string& key, const PolyradiusPtr& amb) const {
    std::vector<TateElement> out;
    if (const auto* e = b.find(key))
      for (const auto& p : split(*e, ',')) out.push_back(element(amb, p));
    return out;
  }

  std::vector<NormValue> norms(const ScenarioBlock& b, const std::string& key) const {
    std::vector<NormValue> out;
    if (const auto* e = b.find(key))
      for (const auto& p : split(*e, ',')) out.push_back(norm_value(p));
    return out;
  }

  std::vector<std::string> words(const ScenarioBlock& b, const std::string& key) const {
    std::vector<std::string> out;
    if (const auto* e = b.find(key))
      for (const auto& p : split(*e, ',')) out.push_back(p.text);
    return out;
  }

  std::vector<Variable> variables(const ScenarioEntry& e) const {
    std::vector<Variable> vars;
    for (const auto& p : split(e, ',')) {
      auto colon = p.text.find(':');
      std::string name = trim(p.text.substr(0, colon));
      if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        fail(p, "invalid variable name '" + name + "'");
      for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) fail(p, "invalid variable name '" + name + "'");
      NormValue r = NormValue::one();
      if (colon != std::string::npos) {
        int col = p.column + static_cast<int>(colon) + 1;
        std::string rt = trim(std::string_view(p.text).substr(colon + 1), col);
        r = norm_value({rt, p.line, col});
      }
      for (const auto& v : vars)
        if (v.name == name) fail(p, "variable '" + name + "' declared twice");
      vars.push_back({name, r});
    }
    return vars;
  }

  void declare_algebra(const ScenarioBlock& b) {
    need_field(b);
    allow_keys(b, {"vars", "relations"});
    std::vector<Variable> vars;
    if (const auto* e = b.find("vars")) vars = variables(*e);
    auto amb = make_polyradius(vars);
    algebras_[b.name] = AffinoidPresentation::make(field(), amb, elements(b, "relations", amb));
  }

  AlgebraPtr algebra_ref(const ScenarioEntry& e) const {
    if (auto it = algebras_.find(e.value); it != algebras_.end()) return it->second;
    if (auto it = extensions_.find(e.value); it != extensions_.end()) return it->second.target();
    fail(e, "unknown algebra '" + e.value + "'");
  }

  AlgebraExtension extension_ref(const ScenarioEntry& e) const {
    if (auto it = extensions_.find(e.value); it != extensions_.end()) return it->second;
    if (auto it = algebras_.find(e.value); it != algebras_.end()) return identity_extension(it->second);
    fail(e, "unknown localization or module '" + e.value + "'");
  }

  void declare_extension(const ScenarioBlock& b) {
    need_field(b);
    const AlgebraPtr base = algebra_ref(require(b, "base"));
    const auto& amb = base->ambient();
    const ScenarioEntry& k = require(b, "kind");
    auto count_match = [&](const std::string& fk, std::size_t nf, const std::string& rk, std::size_t nr) {
      if (nf != nr) fail(b.find(rk) ? *b.find(rk) : require(b, fk),
                         "'" + fk + "' has " + std::to_string(nf) + " entries but '" + rk + "' has " + std::to_string(nr));
    };
    try {
      if (k.value == "weierstrass") {
        allow_keys(b, {"base", "kind", "f", "r", "names"});
        auto f = elements(b, "f", amb);
        auto r = norms(b, "r");
        count_match("f", f.size(), "r", r.size());
        extensions_.emplace(b.name, weierstrass(base, f, r, words(b, "names")));
      } else if (k.value == "laurent") {
        allow_keys(b, {"base", "kind", "f", "p", "g", "q", "names", "s-names"});
        auto f = elements(b, "f", amb);
        auto p = norms(b, "p");
        auto g = elements(b, "g", amb);
        auto q = norms(b, "q");
        if (f.size() != p.size()) count_match("f", f.size(), "p", p.size());
        if (g.size() != q.size()) count_match("g", g.size(), "q", q.size());
        extensions_.emplace(b.name, laurent(base, f, p, g, q, words(b, "names"), words(b, "s-names")));
      } else if (k.value == "rational") {
        allow_keys(b, {"base", "kind", "f", "g", "r", "cert-b", "cert-a", "names"});
        auto f = elements(b, "f", amb);
        auto r = norms(b, "r");
        count_match("f", f.size(), "r", r.size());
        const auto& ge = require(b, "g");
        TateElement g = element(amb, {ge.value, ge.line, ge.column});
        std::optional<BezoutCertificate> cert;
        if (const auto* cb = b.find("cert-b")) {
          cert = BezoutCertificate{element(amb, {cb->value, cb->line, cb->column}), elements(b, "cert-a", amb)};
          count_match("f", f.size(), "cert-a", cert->a.size());
        } else if (b.find("cert-a")) {
          fail(*b.find("cert-a"), "'cert-a' needs 'cert-b'");
        }
        extensions_.emplace(b.name, rational(base, f, g, r, cert, words(b, "names")));
      } else if (k.value == "quotient") {
        allow_keys(b, {"base", "kind", "relations"});
        extensions_.emplace(b.name, quotient(base, elements(b, "relations", amb)));
      } else if (k.value == "free") {
        allow_keys(b, {"base", "kind", "vars"});
        extensions_.emplace(b.name, free_extension(base, variables(require(b, "vars"))));
      } else if (k.value == "identity") {
        allow_keys(b, {"base", "kind"});
        extensions_.emplace(b.name, identity_extension(base));
      } else {
        fail(k, "unknown localization kind '" + k.value + "'");
      }
    } catch (const ScenarioError&) {
      throw;
    } catch (const Error& e) {
      fail(b.line, b.column, b.name + ": " + e.what());
    }
  }

  void declare_cover(const ScenarioBlock& b) {
    allow_keys(b, {"base", "pieces"});
    CoverData c;
    c.base = algebra_ref(require(b, "base"));
    const auto& pe = require(b, "pieces");
    for (const auto& p : split(pe, ',')) {
      AlgebraExtension ext = extension_ref({pe.key, p.text, p.line, p.column, pe.key_column});
      if (ext.base() != c.base && ext.base()->str() != c.base->str())
        fail(p, "piece '" + p.text + "' is not over '" + b.find("base")->value + "'");
      c.pieces.push_back(std::move(ext));
      piece_names_[b.name].push_back(p.text);
    }
    covers_.emplace(b.name, std::move(c));
  }

  std::vector<Scalar> scalars(const Piece& p) const {
    std::vector<Scalar> out;
    for (const auto& q : split({"", p.text, p.line, p.column}, ',')) out.push_back(scalar(q));
    return out;
  }

  void declare_samples(const ScenarioBlock& b) {
    need_field(b);
    allow_keys(b, {"base", "rigid", "gauss", "default"});
    const AlgebraPtr base = algebra_ref(require(b, "base"));
    std::vector<BerkovichPointSample> pts;
    if (flag(b, "default", false)) pts = default_samples(field(), *base->ambient());
    auto admit = [&](const Piece& p, BerkovichPointSample pt) {
      try {
        check_admissible(field(), *base->ambient(), pt);
      } catch (const Error& e) {
        fail(p, e.what());
      }
      pts.push_back(std::move(pt));
    };
    if (const auto* e = b.find("rigid"))
      for (const auto& p : split(*e, ';')) admit(p, RigidPoint{scalars(p)});
    if (const auto* e = b.find("gauss"))
      for (const auto& p : split(*e, ';')) {
        auto at = p.text.find('@');
        if (at == std::string::npos) fail(p, "Gauss point needs 'centre @ radii'");
        int ccol = p.column, rcol = p.column + static_cast<int>(at) + 1;
        std::string c = trim(std::string_view(p.text).substr(0, at), ccol);
        std::string r = trim(std::string_view(p.text).substr(at + 1), rcol);
        GaussPoint g{scalars({c, p.line, ccol}), {}};
        for (const auto& q : split({"", r, p.line, rcol}, ',')) g.radii.push_back(norm_value(q));
        admit(p, std::move(g));
      }
    if (pts.empty()) fail(b.line, b.column, "samples '" + b.name + "' is empty");
    samples_.emplace(b.name, std::make_pair(base, std::move(pts)));
  }

  void validate_check(const ScenarioBlock& b) const {
    const std::string& kind = b.find("kind")->value;
    if (kind == "epi" || kind == "hoepi") {
      allow_keys(b, {"kind", "target", "degree"});
      extension_ref(require(b, "target"));
    } else if (kind == "transversal") {
      allow_keys(b, {"kind", "module", "target", "degree"});
      auto m = extension_ref(require(b, "module"));
      auto t = extension_ref(require(b, "target"));
      if (m.base()->str() != t.base()->str()) fail(require(b, "module"), "module and target have different bases");
    } else if (kind == "cech") {
      allow_keys(b, {"kind", "cover", "module", "depth", "alternating", "degree"});
      const CoverData& c = cover_ref(require(b, "cover"));
      if (const auto* m = b.find("module"))
        if (extension_ref(*m).base()->str() != c.base->str()) fail(*m, "module is not over the cover base");
      if (const auto* d = b.find("depth")) positive(*d, 16);
      flag(b, "alternating", true);
    } else if (kind == "cover") {
      allow_keys(b, {"kind", "cover", "samples", "probe", "degree"});
      const CoverData& c = cover_ref(require(b, "cover"));
      if (const auto* e = b.find("samples")) {
        auto it = samples_.find(e->value);
        if (it == samples_.end()) fail(*e, "unknown samples '" + e->value + "'");
        if (it->second.first->str() != c.base->str()) fail(*e, "samples are not over the cover base");
      }
      if (!c.base->relations().empty())
        fail(require(b, "cover"), "cover checks need a free Tate algebra as base");
      flag(b, "probe", true);
    } else if (kind == "norm-table") {
      allow_keys(b, {"kind", "algebra", "elements", "degree"});
      auto a = algebra_ref(require(b, "algebra"));
      elements(b, "elements", a->ambient());
      require(b, "elements");
    } else if (kind == "property") {
      allow_keys(b, {"kind", "property", "count", "degree"});
      const auto& p = require(b, "property");
      if (p.value != "gauss-multiplicativity" && p.value != "koszul-injectivity")
        fail(p, "unknown property '" + p.value + "'");
      if (const auto* c = b.find("count")) positive(*c, 100000);
      if (!s_.field_declared) fail(b.line, b.column, "no 'field' declared");
    }
  }

  const CoverData& cover_ref(const ScenarioEntry& e) const {
    auto it = covers_.find(e.value);
    if (it == covers_.end()) fail(e, "unknown cover '" + e.value + "'");
    return it->second;
  }

  void run_check(const ScenarioBlock& b, const std::string& kind, unsigned D, std::size_t index, json& rec,
                 std::string& summary) {
    if (kind == "epi" || kind == "hoepi") {
      const auto& t = require(b, "target");
      rec["target"] = t.value;
      MorphismVerdict v = kind == "epi" ? is_epimorphism(extension_ref(t), D) : is_homotopy_epi(extension_ref(t), D);
      rec["verdict"] = to_string(v.outcome);
      rec["result"] = verdict_json(v);
      summary = t.value + ": " + v.reason;
    } else if (kind == "transversal") {
      const auto& m = require(b, "module");
      const auto& t = require(b, "target");
      rec["module"] = m.value;
      rec["target"] = t.value;
      MorphismVerdict v = check_transversal(extension_ref(m), extension_ref(t), D);
      rec["verdict"] = to_string(v.outcome);
      rec["result"] = verdict_json(v);
      summary = m.value + " vs " + t.value + ": " + v.reason;
    } else if (kind == "cech") {
      run_cech(b, D, rec, summary);
    } else if (kind == "cover") {
      run_cover(b, D, rec, summary);
    } else if (kind == "norm-table") {
      const auto& a = require(b, "algebra");
      AlgebraPtr alg = algebra_ref(a);
      rec["algebra"] = a.value;
      json rows = json::array();
      for (const auto& f : elements(b, "elements", alg->ambient())) {
        json row;
        row["element"] = f.str();
        row["gauss_norm"] = gauss_norm(field(), f).str();
        if (!alg->relations().empty()) {
          unsigned deg = std::max(D, f.degree());
          ReducedForm r = alg->reduce(f, deg);
          row["normal_form"] = r.representative.str();
          row["residue_norm_upper"] = r.residue_norm_upper.str();
        }
        rows.push_back(std::move(row));
      }
      rec["verdict"] = "exact";
      summary = std::to_string(rows.size()) + " norms";
      rec["rows"] = std::move(rows);
    } else if (kind == "property") {
      run_property(b, D, index, rec, summary);
    }
  }

  void run_cech(const ScenarioBlock& b, unsigned D, json& rec, std::string& summary) {
    const auto& ce = require(b, "cover");
    const CoverData& c = cover_ref(ce);
    rec["cover"] = ce.value;
    AlgebraExtension module = identity_extension(c.base);
    if (const auto* m = b.find("module")) {
      module = extension_ref(*m);
      rec["module"] = m->value;
    }
    bool alternating = opt_.alternating.value_or(flag(b, "alternating", true));
    std::size_t depth = opt_.depth.value_or(b.find("depth") ? positive(*b.find("depth"), 16) : 0);
    rec["alternating"] = alternating;
    if (depth) rec["depth"] = depth;
    AcyclicityResult r = acyclicity_check(c, module, D, alternating, depth);
    json pre = json::array();
    const auto& names = piece_names_.at(ce.value);
    for (std::size_t i = 0; i < r.preconditions.size(); ++i) {
      const auto& v = r.preconditions[i];
      pre.push_back({{"piece", names[i / 2]}, {"kind", to_string(v.kind)}, {"outcome", to_string(v.outcome)},
                     {"reason", v.reason}});
    }
    rec["preconditions"] = std::move(pre);
    if (r.refused) {
      rec["verdict"] = "refused";
      rec["diagnostic"] = r.diagnostic;
      summary = r.diagnostic;
      return;
    }
    rec["verdict"] = r.witness.exact ? "exact" : "inexact";
    json levels = json::array();
    std::string constants;
    for (std::size_t i = 0; i < r.witness.levels.size(); ++i) {
      const auto& l = r.witness.levels[i];
      json j;
      j["degree"] = l.degree;
      json tuples = json::array();
      if (static_cast<std::size_t>(l.degree) < r.tuples.size())
        for (const auto& t : r.tuples[static_cast<std::size_t>(l.degree)]) tuples.push_back(format_tuple(t));
      j["summands"] = std::move(tuples);
      j["exact"] = l.exact;
      j["constant"] = l.constant.str();
      if (l.counterexample) j["counterexample"] = strings(*l.counterexample);
      levels.push_back(std::move(j));
      constants += (i ? ", " : "") + l.constant.str();
    }
    rec["levels"] = std::move(levels);
    if (r.witness.note) rec["note"] = *r.witness.note;
    summary = std::string(r.witness.exact ? "strictly exact" : "not exact") + ", constants " + constants;
  }

  void run_cover(const ScenarioBlock& b, unsigned D, json& rec, std::string& summary) {
    const auto& ce = require(b, "cover");
    const CoverData& c = cover_ref(ce);
    rec["cover"] = ce.value;
    std::vector<BerkovichPointSample> pts;
    if (const auto* e = b.find("samples")) {
      pts = samples_.at(e->value).second;
      rec["samples"] = e->value;
    } else {
      pts = default_samples(field(), *c.base->ambient());
      rec["samples"] = "default";
    }
    std::vector<DomainData> doms;
    const auto& names = piece_names_.at(ce.value);
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
      if (!c.pieces[i].domain) fail(ce, "piece '" + names[i] + "' is not a localization");
      doms.push_back(domain_of(c.pieces[i]));
    }
    CoverReport r = cover_check(field(), doms, pts);
    rec["verdict"] = r.covered ? "covered" : "uncovered";
    rec["sample_count"] = pts.size();
    json table = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      json in = json::array();
      for (auto j : r.membership[i]) in.push_back(names[j]);
      table.push_back({{"point", format_point(pts[i])}, {"pieces", std::move(in)}});
    }
    rec["membership"] = std::move(table);
    json unc = json::array();
    for (const auto& p : r.uncovered) unc.push_back(format_point(p));
    rec["uncovered"] = std::move(unc);
    summary = r.covered ? std::to_string(pts.size()) + " samples covered"
                        : std::to_string(r.uncovered.size()) + " uncovered, first " + format_point(r.uncovered.front());
    if (!r.covered && flag(b, "probe", true)) {
      AlgebraExtension w = point_witness(c.base, r.uncovered.front());
      ConservativityReport probe = conservativity_probe(w, c.pieces, D);
      json pj;
      pj["point"] = format_point(r.uncovered.front());
      pj["witness"] = w.target()->str();
      pj["witness_nonzero"] = probe.witness_nonzero;
      json pulls = json::array();
      for (std::size_t i = 0; i < c.pieces.size(); ++i)
        pulls.push_back({{"piece", names[i]}, {"zero", static_cast<bool>(probe.pullback_zero[i])},
                         {"reason", probe.reasons[i]}});
      pj["pullbacks"] = std::move(pulls);
      pj["detects_gap"] = probe.detects_gap();
      rec["probe"] = std::move(pj);
      if (probe.detects_gap()) summary += "; witness module vanishes on every piece";
    }
  }

  void run_property(const ScenarioBlock& b, unsigned D, std::size_t index, json& rec, std::string& summary) {
    const std::string prop = b.find("property")->value;
    const std::size_t count = b.find("count") ? positive(*b.find("count"), 100000) : 50;
    rec["property"] = prop;
    rec["count"] = count;
    Corpus corpus(opt_.seed * 1000003ULL + index, field());
    json failures = json::array();
    if (prop == "gauss-multiplicativity") {
      auto amb = make_polyradius({{"x", NormValue::one()}, {"y", NormValue::one()}});
      for (std::size_t i = 0; i < count; ++i) {
        TateElement f = corpus.element(amb, 3, 4), g = corpus.element(amb, 3, 4);
        NormValue lhs = gauss_norm(field(), f * g), rhs = gauss_norm(field(), f) * gauss_norm(field(), g);
        if (lhs != rhs && failures.size() < 5)
          failures.push_back({{"f", f.str()}, {"g", g.str()}, {"product", lhs.str()}, {"expected", rhs.str()}});
      }
    } else {
      auto amb = make_polyradius({{"x", NormValue::one()}, {"T", NormValue::one()}});
      AlgebraPtr level = AffinoidPresentation::make(field(), amb);
      for (std::size_t i = 0; i < count; ++i) {
        TateElement f = corpus.element(amb, 3, 3);
        // f in the base variable only
        TateElement fx(amb);
        for (const auto& [e, c] : f.terms()) fx.add_term(Exponent{e[0] + e[1], 0}, c);
        if (fx.is_zero()) fx = TateElement::variable(amb, "x");
        ChainComplex k = koszul(level, {TateElement::variable(amb, "T") - fx}, D);
        HomologyReport h = homology(k, -1, D);
        if (!h.is_zero && failures.size() < 5)
          failures.push_back({{"f", fx.str()}, {"rank", h.rank}, {"generator", strings(h.generators.front())}});
      }
    }
    rec["verdict"] = failures.empty() ? "holds" : "fails";
    if (!failures.empty()) rec["failures"] = std::move(failures);
    summary = std::to_string(count) + " cases";
  }

  const Scenario& s_;
  RunOptions opt_;
  std::set<std::string> names_;
  std::map<std::string, AlgebraPtr> algebras_;
  std::map<std::string, AlgebraExtension> extensions_;
  std::map<std::string, CoverData> covers_;
  std::map<std::string, std::vector<std::string>> piece_names_;
  std::map<std::string, std::pair<AlgebraPtr, std::vector<BerkovichPointSample>>> samples_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& path) { return Parser(text, path).run(); }

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

RunResult run_scenario(const Scenario& s, const RunOptions& opt) { return Runner(s, opt).run(); }

}  // namespace afnd
