#pragma once

#include "rydgate_cli/emit.hpp"

#include "rydgate/config.hpp"

#include <iosfwd>

namespace rydgate::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_config = 2,
    exit_numerical = 3,
};

// Entry point of the `rydgate` tool. Output goes to --out or `out`;
// diagnostics go to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// Built-in invariant suite behind `rydgate verify`; sets all_passed.
Table verify_suite(const ModelConfig &cfg, unsigned threads, bool &all_passed);

} // namespace rydgate::cli
