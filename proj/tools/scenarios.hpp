#pragma once

#include <string>

#include "config.hpp"

namespace nccli {

// Exit codes: 0 success, 1 check failure, 2 numerical blow-up, 3 I/O,
// 4 config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitConfig = 4;

int cmd_simulate(const RunConfig& cfg);
int cmd_legendre_check(const RunConfig& cfg);
int cmd_bracket_audit(const RunConfig& cfg);
int cmd_dispersion(const RunConfig& cfg);
int run_scenario(const RunConfig& cfg);

// 17 significant digits: doubles survive a text round trip
std::string format_double(double x);

} // namespace nccli
