#pragma once

#include "wavesel/lattice.hpp"

#include <ostream>
#include <string_view>

namespace wavesel::cli {

enum ExitCode : int {
    ok = 0,
    usage_error = 1,
    no_solution = 2,  ///< infeasible or time-limited search; best-so-far is still printed
    selftest_failed = 3,
};

/// Comma-separated wavelengths, each "a", "a/b" or an exact decimal.
WavelengthSet parse_wavelengths(std::string_view text);

/// Range in meters: a decimal, optionally with a "pi" factor ("6pi", "6*pi", "pi").
double parse_range(std::string_view text);

/// Entry point behind the wavesel executable. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavesel::cli
