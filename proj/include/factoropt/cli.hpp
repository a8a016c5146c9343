#pragma once

#include <ostream>

#include "factoropt/error.hpp"

namespace factoropt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitParse = 5;

int exit_code(ErrorKind kind) noexcept;

/// Entry point shared by the `factoropt` binary and the integration tests.
/// Subcommands: describe, train, optimize, serve.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace factoropt::cli
