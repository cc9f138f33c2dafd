#pragma once

#include <iosfwd>

namespace polya {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Parses arguments and dispatches one subcommand: rearrange, energy, seminorm,
/// perimeter, kernels, verify or sweep.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polya
