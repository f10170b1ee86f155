#pragma once

#include "wavesel/lattice.hpp"

#include <cmath>
#include <span>

namespace wavesel {

/// <x> = x - round(x), halves rounded up; result in [-1/2, 1/2).
inline double wrap(double x) {
    double r = x - std::floor(x + 0.5);
    // x + 0.5 can round up across an integer boundary
    if (r < -0.5) r += 1.0;
    if (r >= 0.5) r -= 1.0;
    return r;
}

/// Round to nearest integer with halves rounded up.
inline double round_half_up(double x) { return std::floor(x + 0.5); }

struct RangeEstimate {
    double r_hat = 0.0;   ///< in [0, P)
    IntVector zeta_hat;   ///< estimated wrapping variables
    double residual = 0;  ///< |Qy - Q zeta_hat|^2
};

/// Least-squares range from wrapped phases y (cycles, each in [-1/2, 1/2)).
/// ctx must carry the wavelengths that produced y.
RangeEstimate estimate_range(std::span<const double> y, const LatticeContext& ctx);

/// True iff zeta_hat - zeta_true is an integer multiple of v, i.e. Q zeta_hat == Q zeta_true.
bool unwrap_correct(const IntVector& zeta_hat, const IntVector& zeta_true, const WavelengthSet& ws);

/// Signed range error folded into [-P/2, P/2).
inline double wrapped_error(double r_hat, double r0, double period) {
    return period * wrap((r_hat - r0) / period);
}

}  // namespace wavesel
