#pragma once

#include <ostream>

namespace infharm {

/// Exit codes: 0 all checks passed, 1 a mathematical check failed,
/// 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kSchemaVersion = 1;

/// Entry point of the `infharm` tool with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infharm
