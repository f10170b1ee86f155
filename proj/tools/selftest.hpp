#pragma once

#include <ostream>

namespace wavesel::cli {

/// Prints one PASS/FAIL line per check; true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace wavesel::cli
