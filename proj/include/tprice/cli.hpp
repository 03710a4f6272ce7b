#pragma once

#include <ostream>
#include <span>
#include <string>

namespace tprice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitError = 2;

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` (or --out), diagnostics to `err` as single lines prefixed with
/// `error[<Code>]:` or `warning[<Code>]:`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tprice::cli
