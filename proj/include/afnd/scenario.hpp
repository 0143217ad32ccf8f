#pragma once

// Scenario files: a line-oriented description of algebras, localizations,
// covers, sample sets and checks, and the runner producing a JSON report.
//
//   field padic 5
//   degree 10
//   algebra A { vars = x:1 }
//   localize V1 {
//     base = A
//     kind = weierstrass
//     f = x
//     r = 5^-1
//   }
//   check c1 {
//     kind = hoepi
//     target = V1
//   }
//
// Block bodies hold one `key = value` entry per line. Lists are separated
// by ','; sample points are separated by ';'. '#' starts a comment.

#include "afnd/scalar.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afnd {

class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& path, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct ScenarioEntry {
  std::string key;
  std::string value;
  int line = 0, column = 0;  // of the value
  int key_column = 0;
};

struct ScenarioBlock {
  std::string kind;
  std::string name;
  int line = 0, column = 0;
  std::vector<ScenarioEntry> entries;

  const ScenarioEntry* find(const std::string& key) const;
};

struct Scenario {
  std::string path;
  FieldSpec field;
  bool field_declared = false;
  std::optional<unsigned> degree;
  std::vector<ScenarioBlock> blocks;
};

Scenario parse_scenario(const std::string& text, const std::string& path = "<input>");
Scenario load_scenario(const std::string& path);

struct RunOptions {
  std::optional<unsigned> degree;
  bool fail_fast = false;
  std::uint64_t seed = 1;
  /// Run only checks of this kind.
  std::optional<std::string> only_kind;
  std::optional<bool> alternating;
  std::optional<std::size_t> depth;
  bool timing = false;
};

struct RunResult {
  nlohmann::ordered_json report;
  /// One human-readable line per executed check.
  std::vector<std::string> lines;
  bool all_passed = true;
  double seconds = 0;
};

/// Throws ScenarioError for unresolved references and malformed values.
RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

/// Verdicts counting as success for the exit status.
bool is_passing_verdict(const std::string& verdict);

}  // namespace afnd
