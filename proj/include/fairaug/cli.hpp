#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace fairaug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

std::string_view version();

// Runs one subcommand. args excludes the program name. Diagnostics go to
// err; --help and --version text to out.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fairaug::cli
