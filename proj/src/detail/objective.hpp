#pragma once

namespace wavesel::detail {

// L2 = Q^2 D + gamma lambda_max^2 / D with D = S / Q^2, where
// S = Q^2 + sum (q_n Q / p_n)^2 is an exact integer. Evaluating from S keeps the
// value independent of the order of (p_n, q_n) pairs. Shared by objective_L2
// and the search leaves so both round identically.
inline double l2_from_parts(double s, double lcm_sq, double gamma_lmax_sq) {
    return s + gamma_lmax_sq * lcm_sq / s;
}

}  // namespace wavesel::detail
