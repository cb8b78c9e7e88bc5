#pragma once

#include <optional>
#include <string>

namespace qnd {

struct RunOptions {
  std::optional<std::string> out_dir;   // overrides the scenario's directory
  std::optional<std::string> format;    // csv | json | both
  unsigned threads = 1;
};

// Exit codes: 0 ok, 1 tolerance failure, 2 input error. Failures emit a
// machine-readable {"error": {...}} object on stderr.
int run_simulate(const std::string& scenario_path, const RunOptions& options = {});
int run_compare(const std::string& scenario_path, const RunOptions& options = {});
int run_validate(const std::string& matrices_path, const RunOptions& options = {});
int run_limit(const std::string& scenario_path, const RunOptions& options = {});

}  // namespace qnd
