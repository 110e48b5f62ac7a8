#pragma once

// Command-line front end: mesh, solve, study, verify {complex|elements|infsup}.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bihar {

/// Exit codes.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2 };

struct RunConfig {
  std::string subcommand;      // mesh, solve, study, verify
  std::string target;          // verify: complex, elements, infsup
  std::string scheme = "cubic";
  std::vector<int> n{8};
  int levels = 0;              // study/verify: meshes n, 2n, ...; mesh/solve: red refinements
  std::string problem = "poly8";
  double tol = 1e-10;
  std::string out;             // empty: standard output
  std::string pair = "g2p1";
  std::string order = "cubic";
  std::uint64_t seed = 2024;
};

/// Runs one command.  Numbers are printed with 12 significant digits.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bihar
