#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace relhyp {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitParse = 2,
  kExitOracle = 3,
  kExitResource = 4,
  kExitSolver = 5,
};

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string action;  // F_n action document (flare, corridor)
  std::string output;  // empty: standard output
  std::string format;  // json | csv; empty picks the subcommand default

  std::string word;  // loop literal: length, area, corridor base element
  int radius = 2;
  int rho = 1;  // peripheral bound
  int n_max = 6;
  std::vector<int> radii{4, 8};
  std::vector<int> escalate;

  int max_area = 16;
  std::size_t max_len = 24;
  std::size_t max_states = 200'000;
  std::size_t max_loops = 200'000;
  std::uint64_t seed = 1;

  std::string window = "strip";   // strip | ball
  std::string cocycle = "ones";   // ones | zero | coboundary
  bool exact = false;

  double lambda = 1.2;
  int N = 2;
  int M = 3;
  int max_g_length = 6;
  int center_radius = 1;
  double lambda_plus = 2.0;
  std::string u, v;  // F_n words for the cocycle pairing
};

std::string version();

/// Runs one subcommand. Results go to `out` (or to config.output), diagnostics
/// to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Formats a real for CSV output: "1.0" for integral values, else %.12g.
std::string format_real(double x);

}  // namespace relhyp
