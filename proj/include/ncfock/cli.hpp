#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ncfock {

struct JobSpec {
  std::string command;
  std::vector<std::string> inputs;  // expressions, JSON symbol files or CSV paths
  int d = 1;
  int N = 4;
  std::optional<double> tol;
  bool force = false;
  std::string out;  // empty: report goes to stdout only
  std::string Z;    // comma-separated reals or CSV path with the n x (n d) block
  std::string W;
  std::string P;    // CSV path; identity when empty
  int rows = 1;     // coefficient dimension for dbb
};

struct JobResult {
  int exit_code = 0;
  std::string report;
  std::string error;
};

inline constexpr long long kMaxWindowDim = 200000;

// Runs one subcommand. Exit codes: 0 success, 2 precondition or parse failure,
// 1 internal error. Writes the report to spec.out when it is set.
JobResult run_job(const JobSpec& spec);

std::vector<std::string> command_names();

}  // namespace ncfock
