#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace obmatch::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command {
  kGenerate,
  kSimulate,
  kCriticalBids,
  kVerifyCovering,
  kVerifyChain,
  kRankingRatio,
  kExactRanking,
  kGreedy,
  kEquilibria,
  kVerifyPoa,
  kValueCovering,
};

enum class Format { kJson, kCsv };

struct RunConfig {
  Command command = Command::kSimulate;
  std::optional<std::string> input_path;
  std::uint64_t seed = 0;
  std::int64_t trials = 10000;
  double mu = 1.0;
  double grid_step = 0.05;
  double epsilon = 0.0;
  Format format = Format::kJson;
  std::optional<std::string> output_path;

  // generate-only parameters
  std::string family = "random";  // "random" or "triangular"
  int gen_buyers = 4;
  int gen_items = 4;
  double edge_prob = 0.5;
  double value_low = 1.0;
  double value_high = 1.0;
  int triangular_n = 4;
};

/// Bad flags, missing command, or an unusable combination; exits with code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name). Returns nullopt if help was
/// requested (help text goes to `out`). Throws UsageError otherwise on bad
/// input.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args,
                                    std::ostream& out);

/// Executes the command, writing the report to cfg.output_path or `out`.
/// Returns 0 on success and 1 when a verification finds a violation.
/// Throws (UsageError, ParseError, ParameterError, ...) on input errors;
/// main maps those to exit code 2.
int run(const RunConfig& cfg, std::ostream& out);

/// Full pipeline: parse, run, map errors to exit codes (0 ok, 1 violation,
/// 2 usage or input error).
int main_impl(const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err);

}  // namespace obmatch::cli
