#pragma once

#include <iosfwd>

namespace lmdtw {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitResource = 3;

/// Entry point of the `linmdtw` tool: align, compare, memreport, synth.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmdtw
