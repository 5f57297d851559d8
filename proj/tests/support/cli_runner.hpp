#pragma once

#include "lxtopic/cli.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace lxtopic::testing {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

/// Runs the CLI in-process; args exclude the program name.
inline CliResult run_cli_args(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"lxtopic"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace lxtopic::testing
