#pragma once

// leggett-lab command line. run_cli is the whole program minus argv
// handling, so tests can drive it in-process.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or validation error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace leggett {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Default seed: LEGGETT_LAB_SEED when set and parseable, else 0xC0FFEE.
std::uint64_t default_seed();

/// Accepts decimal or 0x-prefixed hexadecimal; throws ValidationError otherwise.
std::uint64_t parse_seed(const std::string& s);

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leggett
