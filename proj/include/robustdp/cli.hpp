#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustdp {

// Exit codes of the command-line tool.
//   0  success / PASS
//   2  invalid configuration
//   3  no-arbitrage check failed (certificate printed)
//   4  tolerance or verification failure
//   5  a cap was exceeded
//   6  success, but a sampled (non-exact) no-arbitrage verdict was used
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoArbitrage = 3;
inline constexpr int kExitVerification = 4;
inline constexpr int kExitCaps = 5;
inline constexpr int kExitSampledNA = 6;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustdp
