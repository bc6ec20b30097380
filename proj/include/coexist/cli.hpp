#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 runtime failure (numerical failure, I/O, failed verification).

#include <ostream>
#include <string>
#include <vector>

namespace coexist {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Environment variable consulted for the output directory when --out is absent.
inline constexpr const char* kOutputEnvVar = "COEXISTD_OUT";

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coexist
