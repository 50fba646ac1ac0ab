#pragma once

// Command-line front end. Commands are plain functions so the test suite can
// drive them without spawning processes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbqa/bench.hpp"
#include "sbqa/solvers.hpp"

namespace sbqa::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Flag combinations the command line rejects (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses argv and runs the selected subcommand. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SBQA_OUTPUT_DIR when set, the working directory otherwise.
std::filesystem::path default_output_dir();

/// Parameter blocks as JSON objects. Keys a solver does not take raise UsageError.
SolverParams params_from_json(const std::string& solver, const json& block);
json params_to_json(const SolverParams& params);

/// Runs one solve, computing a DSATUR coloring first for DTSQA.
SolverRun solve_with(const IsingModel& model, const SolverParams& params, std::uint64_t seed);

struct BenchOutput {
  std::filesystem::path csv;
  std::filesystem::path report;
  std::size_t skipped = 0;
  std::size_t instances = 0;
};

/// Executes a bench config (see README for the schema). `seed` overrides the
/// config's master seed.
BenchOutput run_bench(const json& config, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
                      std::ostream& log);

}  // namespace sbqa::cli
