#pragma once

#include <iosfwd>

namespace segmerge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitUsage = 2;

/// `segmerge [options] INPUT...`. Diagnostics go to `err`, one line each.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace segmerge::cli
