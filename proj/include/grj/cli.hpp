#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "grj/solver.hpp"
#include "grj/suite.hpp"

namespace grj {

enum class OutputFormat { Csv, Json };

struct RunSpec {
  std::vector<std::string> problems;
  std::size_t n_starts = 200;
  SolverConfig config;
  std::filesystem::path out_dir = "grj_out";
  OutputFormat format = OutputFormat::Csv;
  std::size_t grid = 0;  // oracle grid for metrics; 0 uses the reference front
  /// "[problem:][solver=]path"; without a problem prefix the first problem is meant.
  std::vector<std::string> external_fronts;
  unsigned jobs = 1;
  bool disc_brake_verbatim = false;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kIo = 1;
inline constexpr int kUsage = 2;
inline constexpr int kMissingFronts = 3;
}  // namespace exit_code

/// Solves every requested problem and writes <out>/<problem>/{front.csv,
/// solutions.csv, trace.jsonl, summary.json}.
int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Writes <out>/metrics.csv and <out>/profile_<measure>.csv from the fronts of
/// earlier runs in <out> and any external fronts.
int cmd_metrics(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// One line per registered problem: name r OV L NL.
int cmd_list(const ProblemRegistry& registry, std::ostream& out);

/// Problem instance honoring run flags (e.g. the verbatim Disc Brake form).
MopProblem resolve_problem(const ProblemRegistry& registry, const std::string& name,
                           const RunSpec& spec);

}  // namespace grj
