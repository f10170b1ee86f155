#pragma once

#include "wavesel/lattice.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wavesel {

/// Wavelength-selection problem: N wavelengths in [lambda_min, lambda_max]
/// with lambda_1 = lambda_max and identifiable range lcm >= r_max.
struct SearchConfig {
    int n = 2;
    Rational r_max{1};
    Rational lambda_min{1};
    Rational lambda_max{2};
    std::optional<double> gamma;               ///< unset: gamma_default
    std::optional<std::int64_t> kappa;         ///< cap on p_n; unset: unbounded
    std::optional<std::chrono::duration<double>> time_limit;
    unsigned workers = 1;                      ///< > 1 splits the top level of the search

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct SearchResult {
    bool feasible = false;
    std::vector<std::int64_t> p;  ///< p_2 <= ... <= p_N
    std::vector<std::int64_t> q;
    std::optional<WavelengthSet> wavelengths;  ///< lambda_max, p_n/q_n * lambda_max
    double objective = 0.0;       ///< L2(p, q)
    double gamma = 0.0;
    bool complete = false;        ///< false when stopped by the time limit
    std::uint64_t nodes_visited = 0;
    std::chrono::duration<double> best_found_at{0};
    std::chrono::duration<double> elapsed{0};
    /// Upper bound after each improvement, starting with the seed bound.
    std::vector<double> bound_history;
};

/// N^2 r_max^2 / (lambda_max^2 lambda_min^2).
double gamma_default(const SearchConfig& cfg);

/// P^2 sum lambda^-2 + gamma / sum lambda^-2.
double objective_L(const WavelengthSet& ws, double gamma);

/// Q(p)^2 D + gamma lambda_max^2 / D with D = 1 + sum q_n^2/p_n^2 and Q(p) = lcm(p).
double objective_L2(std::span<const std::int64_t> p, std::span<const std::int64_t> q, double gamma,
                    const Rational& lambda_max);

struct UpperBoundSeed {
    double l_tilde = 0.0;
    std::int64_t w_seed = 0;  ///< smallest integer >= r_max/lambda_max and lambda_min/(lambda_max - lambda_min)
    std::vector<std::int64_t> p;
    std::vector<std::int64_t> q;
    WavelengthSet wavelengths;
};

/// Feasible starting point: all N-1 free wavelengths equal to w/(w+1) lambda_max.
UpperBoundSeed initial_upper_bound(const SearchConfig& cfg, double gamma);

/// Depth-first search over (p, q) minimizing L2 subject to the bandwidth and
/// range constraints. Deterministic: among equal objectives the first found in
/// ascending-p depth-first order wins, independent of the worker count.
SearchResult optimize(const SearchConfig& cfg);

}  // namespace wavesel
