#include "afnd/scenario.hpp"

#include "CLI11.hpp"

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

struct Args {
  std::string file;
  unsigned degree = 0;
  std::string json_out;
  bool fail_fast = false;
  std::uint64_t seed = 1;
  bool timing = false;
  bool alternating = false, full = false;
  std::size_t depth = 0;
};

void common_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("file", a.file, "scenario file")->required();
  cmd->add_option("--degree", a.degree, "truncation degree D (overrides the scenario default)")->check(CLI::Range(1u, 10000u));
  cmd->add_option("--json", a.json_out, "write the JSON report here ('-' for stdout)");
  cmd->add_flag("--fail-fast", a.fail_fast, "stop at the first failing check");
  cmd->add_option("--seed", a.seed, "seed for randomized property corpora");
  cmd->add_flag("--timing", a.timing, "include wall times in the JSON report");
}

int execute(const Args& a, std::optional<std::string> only) {
  afnd::RunOptions opt;
  if (a.degree) opt.degree = a.degree;
  opt.fail_fast = a.fail_fast;
  opt.seed = a.seed;
  opt.only_kind = std::move(only);
  opt.timing = a.timing;
  if (a.alternating) opt.alternating = true;
  if (a.full) opt.alternating = false;
  if (a.depth) opt.depth = a.depth;
  afnd::RunResult r;
  try {
    r = afnd::run_scenario(afnd::load_scenario(a.file), opt);
  } catch (const afnd::Error& e) {
    std::cerr << "afnd: " << e.what() << "\n";
    return 2;
  }
  const bool json_stdout = a.json_out == "-";
  if (!json_stdout)
    for (const auto& l : r.lines) std::cout << l << "\n";
  const std::string text = r.report.dump(2) + "\n";
  if (json_stdout) {
    std::cout << text;
  } else if (!a.json_out.empty()) {
    std::ofstream out(a.json_out, std::ios::binary);
    if (!out) {
      std::cerr << "afnd: cannot write '" << a.json_out << "'\n";
      return 2;
    }
    out << text;
  }
  std::fprintf(stderr, "wall time %.3f s\n", r.seconds);
  return r.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("afnd");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  // e.g. AFND_LOG=debug
  if (const char* lvl = std::getenv("AFND_LOG")) spdlog::cfg::helpers::load_levels(lvl);

  CLI::App app{"Truncated verification of affinoid localizations, covers and complexes"};
  app.require_subcommand(1);
  Args a;
  struct Sub {
    const char* name;
    std::optional<std::string> kind;
    const char* help;
  };
  const Sub subs[] = {
      {"run", std::nullopt, "run every check of a scenario"},
      {"epi-check", "epi", "run the epimorphism checks"},
      {"hoepi-check", "hoepi", "run the homotopy-epimorphism checks"},
      {"transversal-check", "transversal", "run the transversality checks"},
      {"cech-check", "cech", "run the Cech-Amitsur acyclicity checks"},
      {"cover-check", "cover", "run the cover surjectivity checks"},
  };
  std::vector<std::pair<CLI::App*, std::optional<std::string>>> cmds;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    common_flags(cmd, a);
    if (std::string(s.name) == "cech-check") {
      auto* alt = cmd->add_flag("--alternating", a.alternating, "alternating cochains only");
      auto* full = cmd->add_flag("--full", a.full, "all tuples");
      alt->excludes(full);
      cmd->add_option("--depth", a.depth, "highest tuple length (default: cover size)")->check(CLI::Range(1, 16));
    }
    cmds.emplace_back(cmd, s.kind);
  }
  CLI11_PARSE(app, argc, argv);
  for (const auto& [cmd, kind] : cmds)
    if (cmd->parsed()) return execute(a, kind);
  return 2;
}
