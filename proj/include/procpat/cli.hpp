#pragma once

#include <iosfwd>

namespace procpat {

/// Exit codes: 0 success, 1 configuration or usage error, 2 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `procpat` command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace procpat
