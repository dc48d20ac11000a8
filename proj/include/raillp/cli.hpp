#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace raillp {

// Parsed command line. One struct for all subcommands; unused fields keep
// their defaults.
struct RunConfig {
  std::string subcommand;  // gen | solve | report | compare | inspect

  // gen
  std::string network = "medium";  // medium | custom:<file>
  std::uint64_t seed = 1;
  int level = 1;
  double ratio = 2.0;

  // solve / compare / inspect
  std::string instance_path;
  std::string scenario = "P+F+M";
  std::string method = "diving";  // diving | pnb
  std::string plan = "MP";        // MP | PE
  int jobs = 1;
  double time_limit_sec = 1800.0;
  bool trace = false;

  // report
  std::string solution_path;

  // compare
  std::vector<double> ratios;
  std::vector<std::string> scenarios;

  // common
  std::string out;
  bool dump_cgn = false;  // inspect --cgn
};

// Parses argv (throws RaillpError on bad usage in library use; the CLI
// binary reports and exits nonzero).
RunConfig parse_args(const std::vector<std::string>& args);

// Executes a parsed command; returns the process exit code.
int run_command(const RunConfig& cfg);

int run_cli(int argc, char** argv);

}  // namespace raillp
