#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gcdsum {

// Effective configuration of one command-line run; embedded in every report.
struct RunConfig {
  std::string subcommand;

  // Weight source: exactly one of alpha / weights_file (alpha = 0.5 when neither is given).
  std::optional<double> alpha;
  std::optional<std::string> weights_file;
  std::string tail = "geometric:0.5";

  std::optional<std::string> input;  // set file
  std::optional<std::string> output;
  std::string format;  // json | csv | text; empty picks the subcommand default
  bool deterministic = false;
  unsigned workers = 0;
  unsigned digits = 50;
  std::uint64_t seed = 0;

  // search
  std::size_t n = 0;
  unsigned max_index = 0;
  std::string mode;
  std::uint64_t iterations = 1000;
  // cube / certify
  unsigned k = 0;
  // bounds / certify
  std::string curve = "theorem1";
  double n_from = 21.0;
  double n_to = 1e12;
  std::size_t points = 50;
  std::optional<double> constant;
  double kappa = 5.0;
  // matrix
  std::string quantity = "both";
  // verify
  std::string suite = "quick";
  std::vector<int> criteria;
  // sum
  bool extended = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFailed = 2;

struct ParseOutcome {
  std::optional<RunConfig> config;  // empty when parsing ended the run (help, usage error)
  int exit_code = kExitOk;
};

// Environment variable consulted for the default --digits.
inline constexpr const char* kDigitsEnv = "GCDSUM_DIGITS";

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcdsum
