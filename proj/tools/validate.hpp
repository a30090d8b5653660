#pragma once

#include <cstdint>
#include <ostream>

/// Invariant checks on small random instances; prints one line per check.
/// Returns true when every check passes.
bool run_validation(std::uint64_t seed, std::ostream& out);
