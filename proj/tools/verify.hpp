#pragma once

#include <cstdint>
#include <iosfwd>

namespace qiro::cli {

/// Randomized self-checks of the library against exhaustive enumeration and
/// the state-vector simulator. Prints one PASS/FAIL line per suite and
/// returns true when all pass. trials = 0 uses each suite's default.
bool run_verify(std::ostream& os, int trials, std::uint64_t seed);

} // namespace qiro::cli
