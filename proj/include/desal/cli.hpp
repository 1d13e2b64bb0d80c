#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace desal {

inline constexpr const char* kToolVersion = "desal 0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInvalidData = 2,
    kExitCertificationFailed = 3,
};

/// Entry point behind the `desal` executable. Data goes to `out` or to files,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace desal
