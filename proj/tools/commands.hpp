#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctrlgauge::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kMissingTarget = 3,
    kSingular = 4,
    kUnstable = 5,
    kNotReachable = 6,
    kOracleDisagreement = 7,
};

// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "%.4g", with exact zero printed as "0".
std::string format4(double value);

} // namespace ctrlgauge::cli
