#pragma once

#include "wavesel/lattice.hpp"

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace wavesel {

/// SplitMix64; one instance per trial, keyed by (seed, grid index, trial index).
class TrialRng {
public:
    using result_type = std::uint64_t;

    explicit TrialRng(std::uint64_t state) : state_(state) {}
    TrialRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::uint64_t state_;
};

/// wrap(e) with e ~ N(0, sigma^2).
double sample_wrapped_normal(double sigma, TrialRng& rng);

struct SimConfig {
    std::vector<Rational> wavelengths;
    double r0 = 0.0;                   ///< reduced into [0, P) before use
    std::vector<double> sigma_sq_grid; ///< phase-noise variances, cycles^2
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct SweepRow {
    double sigma_sq = 0;
    double sample_mse = 0;     ///< mean of (P wrap((r_hat - r0)/P))^2
    double predicted_mse = 0;  ///< sigma^2 / sum lambda^-2
    double correct_rate = 0;   ///< fraction of trials with Q zeta_hat == Q zeta
    double p_upper = 0;        ///< determinant-ball bound on correct_rate
    std::uint64_t trials = 0;
};

/// Monte-Carlo sweep of the least-squares estimator over cfg.sigma_sq_grid.
/// Output is bit-identical for any worker count.
std::vector<SweepRow> run_sweep(const SimConfig& cfg, const LatticeContext& ctx);

/// count log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// "lo:hi:log,count" or a comma-separated list of values.
std::vector<double> parse_grid(std::string_view text);

}  // namespace wavesel
