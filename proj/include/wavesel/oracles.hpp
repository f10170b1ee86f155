#pragma once

// Brute-force reference computations. These deliberately avoid the lattice
// basis, the decoder and the incremental search so they can check them.

#include "wavesel/lattice.hpp"
#include "wavesel/wavesearch.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wavesel::oracle {

/// min |Q t - Q z|^2 over z with |z_i - c_i| <= half_width, where c is the
/// rounding of t after removing its multiple of v (which Q ignores).
double box_closest_distance(const IntVector& v, std::span<const double> target, int half_width);

/// min |Q z| over nonzero Qz with |z_i| <= half_width.
double box_shortest_length(const IntVector& v, int half_width);

/// Exact determinant of a square matrix given as rows (fraction-valued elimination).
Rational determinant(std::vector<RationalVector> rows);

/// det(B'B) for the columns of B.
Rational gram_determinant(const std::vector<RationalVector>& columns);

struct BruteForceOptimum {
    bool found = false;
    double objective = 0.0;
    std::vector<std::int64_t> p;
    std::vector<std::int64_t> q;
    std::uint64_t candidates = 0;
};

/// Minimum of L2 over every (p, q) in the pruning box: unsorted p_n in
/// [1, floor(sqrt((L_seed - gamma B)/N))] (and <= kappa), p_n <= q_n <= p_n lambda_max/lambda_min,
/// gcd(p_n, q_n) = 1, lcm(p) >= r_max/lambda_max. Only leaves strictly below
/// the seed bound count, matching the search's acceptance rule.
BruteForceOptimum box_optimum(const SearchConfig& cfg);

}  // namespace wavesel::oracle
