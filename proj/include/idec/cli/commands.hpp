#pragma once

#include <iosfwd>
#include <string>

#include "idec/cli/config.hpp"
#include "idec/error.hpp"

namespace idec::cli {

/// What a command produced. `data` is the CSV (or JSON document under
/// --format json); `summary` is a JSON document or empty.
struct CommandOutput {
  std::string data;
  std::string summary;
  int exit_code = 0;
  std::string diagnostic;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitMismatch = 4;

int exit_code_for(ErrorKind kind);

CommandOutput run_kernel(const RunConfig& cfg);
CommandOutput run_evolve(const RunConfig& cfg);
CommandOutput run_scenario(const RunConfig& cfg);
CommandOutput run_check(const RunConfig& cfg);
CommandOutput run_sweep(const RunConfig& cfg);

/// Dispatches on cfg.command; library errors become exit codes.
CommandOutput run(const RunConfig& cfg);

/// Full command-line entry point: parses flags, runs, writes outputs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace idec::cli
