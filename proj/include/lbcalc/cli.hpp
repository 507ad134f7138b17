#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbcalc::cli {

// Bad command line: unknown verb or flag, missing flag, malformed value.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int {
  kOk = 0,
  kVerdictFalse = 1,
  kUsage = 2,
  kDomain = 3,
  kInternal = 4,
};

struct Command {
  std::string verb;
  std::vector<std::string> inputs;
  std::optional<int> order;
  std::optional<double> s;
  std::optional<std::string> z;
  std::optional<double> epsilon;
  std::optional<double> r;
  std::optional<double> R;
  std::optional<int> samples;
  std::optional<int> degree;
  std::optional<int> u;
  std::optional<int> n;
  std::optional<int> l;
  std::uint64_t seed = 0;
  bool seed_given = false;  // from --seed or LBCALC_SEED
  std::string help;         // filled when verb == "help"
};

inline constexpr std::uint64_t kDefaultSeed = 1;

const std::vector<std::string>& verbs();

/// argv without the program name. `env_seed` stands in for LBCALC_SEED.
/// Throws UsageError; the help flag yields a Command with verb "help".
Command parse(const std::vector<std::string>& args, const std::optional<std::string>& env_seed);
/// Reads LBCALC_SEED from the environment.
Command parse(const std::vector<std::string>& args);

/// Runs the command and writes one JSON report to `out`; diagnostics go to `err`.
int execute(const Command& command, std::ostream& out, std::ostream& err);

/// parse + execute with exit-code mapping.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names of the library operations a report may list under "operations".
const std::vector<std::string>& operation_names();

}  // namespace lbcalc::cli
