#pragma once

#include <iosfwd>

namespace lxtopic {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `lxtopic` tool: subcommands fit, sweep, eval and
/// calibrate. Results go to `out`, progress and diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lxtopic
