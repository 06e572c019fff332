#pragma once

#include <iosfwd>

namespace mitofreq {

/// Exit codes: 0 success, 2 domain error, 3 configuration or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitConfig = 3;

/// Entry point behind the `mitofreq` binary; writes to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mitofreq
