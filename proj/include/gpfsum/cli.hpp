#pragma once

// Command-line front end: sb, sa, oracle, pz, check-bounds, self-test.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gpfsum {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,   // a reference comparison or inequality check failed
    kExitInvalidArgs = 2,
    kExitPrecondition = 3,  // e.g. x below the proven range
    kExitIo = 4,            // checkpoint or file trouble
    kExitComputation = 5,
};

inline constexpr int kReportSchemaVersion = 1;

/// Environment variable that sets the default worker count.
inline constexpr const char* kThreadsEnv = "GPFSUM_THREADS";

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a structured report and renders it again.
std::string rerender_report(std::string_view report);

/// The report without its "execution" section (threads, timing, resume
/// state), for comparing runs.
std::string strip_execution(std::string_view report);

} // namespace gpfsum
