#include "wavesel/sim.hpp"

#include "wavesel/analysis.hpp"
#include "wavesel/estimator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace wavesel {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct TrialOutcome {
    double err_sq = 0;
    bool correct = false;
};

// Neumaier summation, applied in trial order.
double compensated_sum(const std::vector<TrialOutcome>& xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& x : xs) {
        const double t = sum + x.err_sq;
        if (std::abs(sum) >= std::abs(x.err_sq)) {
            comp += (sum - t) + x.err_sq;
        } else {
            comp += (x.err_sq - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("malformed number: '" + std::string(s) + "'");
    }
    return value;
}

TrialOutcome run_trial(const LatticeContext& ctx, const WavelengthSet& ws, double r0, double sigma,
                       TrialRng& rng, std::vector<double>& y, IntVector& zeta) {
    const auto& w = ws.reciprocals();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = r0 * w[i] + sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
        const double k = std::floor(x + 0.5);
        double yi = x - k;
        double ki = k;
        if (yi < -0.5) { yi += 1.0; ki -= 1.0; }
        if (yi >= 0.5) { yi -= 1.0; ki += 1.0; }
        y[i] = yi;
        zeta[i] = -static_cast<long>(ki);
    }
    const RangeEstimate est = estimate_range(y, ctx);
    const double e = wrapped_error(est.r_hat, r0, ws.lcm_double());
    return {e * e, unwrap_correct(est.zeta_hat, zeta, ws)};
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial)
    : state_(mix(mix(mix(seed) ^ (stream + 0x9e3779b97f4a7c15ULL)) ^ (trial * 0xd1b54a32d192ed03ULL))) {}

TrialRng::result_type TrialRng::operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

double sample_wrapped_normal(double sigma, TrialRng& rng) {
    if (sigma < 0.0) throw std::domain_error("sigma must be nonnegative");
    if (sigma == 0.0) return 0.0;
    return wrap(sigma * std::normal_distribution<double>(0.0, 1.0)(rng));
}

std::vector<SweepRow> run_sweep(const SimConfig& cfg, const LatticeContext& ctx) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (!ctx.source()) throw std::invalid_argument("lattice context carries no wavelengths");
    const WavelengthSet& ws = *ctx.source();
    if (ws.lambdas() != cfg.wavelengths) throw std::invalid_argument("context built from different wavelengths");
    const double period = ws.lcm_double();
    double r0 = std::fmod(cfg.r0, period);
    if (r0 < 0.0) r0 += period;

    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<SweepRow> rows;
    rows.reserve(cfg.sigma_sq_grid.size());
    std::vector<TrialOutcome> outcomes(cfg.trials);

    for (std::size_t g = 0; g < cfg.sigma_sq_grid.size(); ++g) {
        const double sigma_sq = cfg.sigma_sq_grid[g];
        if (!(sigma_sq > 0.0)) throw std::invalid_argument("sigma^2 grid values must be positive");
        const double sigma = std::sqrt(sigma_sq);

        auto chunk = [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<double> y(ws.size());
            IntVector zeta(ws.size());
            for (std::uint64_t t = begin; t < end; ++t) {
                TrialRng rng(cfg.seed, g, t);
                outcomes[t] = run_trial(ctx, ws, r0, sigma, rng, y, zeta);
            }
        };
        if (workers == 1) {
            chunk(0, cfg.trials);
        } else {
            std::vector<std::thread> threads;
            const std::uint64_t per = (cfg.trials + workers - 1) / workers;
            for (unsigned k = 0; k < workers; ++k) {
                const std::uint64_t begin = std::min<std::uint64_t>(cfg.trials, k * per);
                const std::uint64_t end = std::min<std::uint64_t>(cfg.trials, begin + per);
                if (begin < end) threads.emplace_back(chunk, begin, end);
            }
            for (auto& t : threads) t.join();
        }

        std::uint64_t correct = 0;
        for (const auto& o : outcomes) correct += o.correct ? 1 : 0;
        const auto n = static_cast<double>(cfg.trials);

        SweepRow row;
        row.sigma_sq = sigma_sq;
        row.sample_mse = compensated_sum(outcomes) / n;
        row.predicted_mse = predicted_mse(ws, sigma_sq);
        row.correct_rate = static_cast<double>(correct) / n;
        row.p_upper = prob_correct_upper(ctx, sigma_sq);
        row.trials = cfg.trials;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
    if (count < 1) throw std::invalid_argument("log grid needs at least one point");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        if (i == count - 1) {
            out.push_back(hi);
        } else {
            out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
        }
    }
    return out;
}

std::vector<double> parse_grid(std::string_view text) {
    if (text.find(':') != std::string_view::npos) {
        // lo:hi:log,count
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        const auto comma = text.find(',', c2 == std::string_view::npos ? c1 : c2);
        if (c2 == std::string_view::npos || comma == std::string_view::npos ||
            text.substr(c2 + 1, comma - c2 - 1) != "log") {
            throw std::invalid_argument("grid must look like lo:hi:log,count");
        }
        const double lo = parse_double(text.substr(0, c1));
        const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
        const double count = parse_double(text.substr(comma + 1));
        if (count != std::floor(count)) throw std::invalid_argument("grid count must be an integer");
        return log_grid(lo, hi, static_cast<int>(count));
    }
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(',', start);
        const auto token = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        const double value = parse_double(token);
        if (!(value > 0.0)) throw std::invalid_argument("sigma^2 values must be positive");
        out.push_back(value);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace wavesel
