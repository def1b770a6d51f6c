#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scratch_anomalies::cli {

enum ExitCode : int {
    kOk = 0,
    kIoFailure = 1,
    kUsage = 2,
    kNothingToAnalyze = 3,  // empty corpus or no scripts
};

/// Entry point of the command-line tool. `args` excludes the program name.
/// The report goes to `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scratch_anomalies::cli
