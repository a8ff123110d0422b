#ifndef PHARM_CLI_HPP_
#define PHARM_CLI_HPP_

// Batch front-end. A manifest is a JSON object:
//   experiment   solve | capacity | witness | royden | massive | roughiso | tilf
//   group        group spec (see io.hpp)
//   p            number or array of numbers in [1.1, 8]
//   radii        array of positive integers
//   solver       {"tolerance", "max_sweeps", "warm_start"}
//   seed         unsigned integer, default 1
//   options      experiment-specific settings (see README)
// Exit codes: 0 success, 1 validation error, 2 a solve did not converge.

#include <iosfwd>
#include <string>

#include "pharm/io.hpp"

namespace pharm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNotConverged = 2;

struct RunOptions {
  std::string out_dir;          // empty: nothing written to disk
  std::string format = "json";  // what goes to stdout: json report or csv table
  bool timing = false;          // include wall-clock times in reports
};

struct RunOutput {
  json report;
  std::string csv;
  // Additional CSV files, name -> contents.
  std::vector<std::pair<std::string, std::string>> extra_csv;
  bool converged = true;
};

// Validates and runs a manifest; throws ValidationError on bad input.
RunOutput run_manifest(const json& manifest, bool timing = false);

json describe_group(const GroupSpec& spec, int radius);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pharm

#endif  // PHARM_CLI_HPP_
