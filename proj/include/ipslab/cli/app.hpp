#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ipslab::cli {

/// Exit codes: 0 success, 1 usage or input error, 2 a verification failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Runs one ipslab command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ipslab::cli
