#pragma once

#include <iosfwd>

#include "cli/run_config.hpp"
#include "fockzero/error.hpp"

namespace fockzero::cli {

/// Parses argv and runs the command. Returns the process exit code: 0 success, 1 usage,
/// 2 invalid input or unmet hypothesis, 3 fit, truncation or numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a fully specified config. Throws fockzero::Error.
void execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int exit_code(ErrorKind kind) noexcept;

}  // namespace fockzero::cli
