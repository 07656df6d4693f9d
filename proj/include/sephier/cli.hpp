#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace sephier {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// Entry point of the `sephier` tool; JSON reports go to `out`,
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sephier
