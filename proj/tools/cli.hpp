#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "macsi/policy_search.hpp"

namespace macsi::cli {

// Process exit codes. Checks that run but fail report kCheckFailed; input
// problems and cap rejections map to the two reserved codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kValidationFailure = 2;
inline constexpr int kCapRejection = 3;

enum class Command {
  region,
  pentagon,
  equiv_check,
  oracle_check,
  best_code,
  simulate,
};

struct RunConfig {
  Command command = Command::region;
  std::string spec_path;
  std::string policy_path;           // pentagon
  std::string out_path;              // region polygon export
  SearchConfig search;               // region (grid/samples/restarts/seed/tol)
  int sample_policies = 100;         // equiv-check policies
  int random_encoders = 200;         // oracle-check factorization pairs
  int block_n = 0;                   // 0 = subcommand default sweep
  int messages_a = 0;                // 0 = default sweep
  int messages_b = 0;
  int trials = 10000;                // simulate
  std::uint64_t seed = 1;
  double tol = -1.0;                 // <0 = per-command default threshold
};

// Executes one subcommand, writing reports to `out` and problems to `err`.
// Returns a process exit code; never throws.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace macsi::cli
