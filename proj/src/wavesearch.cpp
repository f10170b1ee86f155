#include "wavesel/wavesearch.hpp"

#include "detail/objective.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace wavesel {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t to_int64(const BigInt& x, const char* what) {
    if (!x.fits_slong_p()) throw std::invalid_argument(std::string(what) + " does not fit in 64 bits");
    return x.get_si();
}

double gamma_lmax_sq(double gamma, const Rational& lambda_max) {
    const double lmax = lambda_max.to_double();
    return gamma * lmax * lmax;
}

WavelengthSet wavelengths_from(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& q,
                               const Rational& lambda_max) {
    std::vector<Rational> lambdas{lambda_max};
    for (std::size_t i = 0; i < p.size(); ++i) {
        lambdas.push_back(Rational(BigInt(static_cast<long>(p[i])), BigInt(static_cast<long>(q[i]))) * lambda_max);
    }
    return WavelengthSet(std::move(lambdas));
}

void atomic_min(std::atomic<double>& target, double value) {
    double current = target.load(std::memory_order_relaxed);
    while (value < current && !target.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
    }
}

// Search-wide constants and the shared incumbent bound.
struct Problem {
    int free = 0;  // N - 1
    double big_n = 0;
    double gamma = 0;
    double gamma_b = 0;
    double glsq = 0;  // gamma * lambda_max^2
    std::int64_t ratio_num = 1;  // lambda_max / lambda_min
    std::int64_t ratio_den = 1;
    std::uint64_t range_threshold = 0;  // ceil(r_max / lambda_max)
    std::optional<std::int64_t> kappa;
    std::optional<Clock::time_point> deadline;
    Clock::time_point start;
    Rational lambda_max;

    std::atomic<double> bound{0.0};
    std::atomic<bool> stop{false};
    std::mutex history_mutex;
    std::vector<double> history;

    [[nodiscard]] std::int64_t q_max(std::int64_t p) const {
        const __int128 prod = static_cast<__int128>(p) * ratio_num;
        return static_cast<std::int64_t>(prod / ratio_den);
    }
};

// One depth-first walker; several may run over disjoint p_2 values.
class Walker {
public:
    Walker(Problem& problem, double seed_value)
        : pr_(problem), best_(seed_value),
          p_(static_cast<std::size_t>(problem.free)), q_(p_.size()),
          lcm_(p_.size()), overflow_(p_.size()) {}

    // Runs the subtree with p_2 fixed.
    void run_top(std::int64_t p2) {
        enter_p(0, p2);
        qsearch(0);
    }

    [[nodiscard]] bool found() const { return found_; }
    [[nodiscard]] double best() const { return best_; }
    [[nodiscard]] const std::vector<std::int64_t>& best_p() const { return best_p_; }
    [[nodiscard]] const std::vector<std::int64_t>& best_q() const { return best_q_; }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
    [[nodiscard]] Clock::duration found_at() const { return found_at_; }

    [[nodiscard]] double p_limit() const { return (pr_.bound.load(std::memory_order_relaxed) - pr_.gamma_b) / pr_.big_n; }

private:
    void enter_p(std::size_t i, std::int64_t p) {
        p_[i] = p;
        const std::uint64_t prev = i == 0 ? 1 : lcm_[i - 1];
        const bool prev_overflow = i != 0 && overflow_[i - 1];
        const auto up = static_cast<std::uint64_t>(p);
        std::uint64_t l = 0;
        overflow_[i] = prev_overflow || __builtin_mul_overflow(prev / std::gcd(prev, up), up, &l);
        lcm_[i] = l;
    }

    void psearch(std::size_t i, std::int64_t from) {
        for (std::int64_t p = from;; ++p) {
            if (pr_.kappa && p > *pr_.kappa) break;
            if (static_cast<double>(p) * static_cast<double>(p) > p_limit()) break;
            enter_p(i, p);
            qsearch(i);
            if (pr_.stop.load(std::memory_order_relaxed)) return;
        }
    }

    void qsearch(std::size_t i) {
        const std::int64_t p = p_[i];
        const std::int64_t q_hi = pr_.q_max(p);
        const bool leaf = i + 1 == p_.size();
        for (std::int64_t q = p; q <= q_hi; ++q) {
            if (std::gcd(p, q) != 1) continue;
            ++nodes_;
            q_[i] = q;
            if (!leaf) {
                psearch(i + 1, p);
            } else {
                evaluate_leaf();
            }
            if (pr_.stop.load(std::memory_order_relaxed)) return;
        }
    }

    void evaluate_leaf() {
        const std::size_t last = p_.size() - 1;
        const bool big = overflow_[last];
        if (!big && lcm_[last] < pr_.range_threshold) {
            check_clock();
            return;
        }
        const double value = big ? objective_L2(p_, q_, pr_.gamma, pr_.lambda_max) : leaf_value(lcm_[last]);
        if (value < best_ && value <= pr_.bound.load(std::memory_order_relaxed)) {
            best_ = value;
            best_p_ = p_;
            best_q_ = q_;
            found_ = true;
            found_at_ = Clock::now() - pr_.start;
            atomic_min(pr_.bound, value);
            std::lock_guard lock(pr_.history_mutex);
            pr_.history.push_back(pr_.bound.load(std::memory_order_relaxed));
        }
        check_clock();
    }

    // Exact S = Q^2 + sum (q_n Q/p_n)^2 in 128 bits; falls back to big integers.
    double leaf_value(std::uint64_t lcm) const {
        using u128 = unsigned __int128;
        u128 s = static_cast<u128>(lcm) * lcm;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            const u128 term = static_cast<u128>(q_[i]) * (lcm / static_cast<std::uint64_t>(p_[i]));
            u128 sq = 0;
            if (__builtin_mul_overflow(term, term, &sq) || __builtin_add_overflow(s, sq, &s)) {
                return objective_L2(p_, q_, pr_.gamma, pr_.lambda_max);
            }
        }
        const auto lcm_d = static_cast<double>(lcm);
        return detail::l2_from_parts(static_cast<double>(s), lcm_d * lcm_d, pr_.glsq);
    }

    void check_clock() {
        if (pr_.deadline && Clock::now() >= *pr_.deadline) pr_.stop.store(true, std::memory_order_relaxed);
    }

    Problem& pr_;
    double best_;
    bool found_ = false;
    std::vector<std::int64_t> p_, q_;
    std::vector<std::uint64_t> lcm_;
    std::vector<bool> overflow_;
    std::vector<std::int64_t> best_p_, best_q_;
    std::uint64_t nodes_ = 0;
    Clock::duration found_at_{0};
};

struct TopLevelResult {
    std::int64_t p2 = 0;
    double value = 0;
    std::vector<std::int64_t> p, q;
    Clock::duration found_at{0};
};

}  // namespace

void SearchConfig::validate() const {
    if (n < 2) throw std::invalid_argument("need at least 2 wavelengths");
    if (lambda_min.sign() <= 0) throw std::invalid_argument("lambda_min must be positive");
    if (!(lambda_min < lambda_max)) throw std::invalid_argument("lambda_min must be smaller than lambda_max");
    if (r_max.sign() <= 0) throw std::invalid_argument("r_max must be positive");
    if (gamma && !(*gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (kappa && *kappa < 1) throw std::invalid_argument("kappa must be at least 1");
    if (time_limit && !(time_limit->count() > 0.0)) throw std::invalid_argument("time limit must be positive");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

double gamma_default(const SearchConfig& cfg) {
    const Rational n(static_cast<long>(cfg.n));
    const Rational g = n * n * cfg.r_max * cfg.r_max /
                       (cfg.lambda_max * cfg.lambda_max * cfg.lambda_min * cfg.lambda_min);
    return g.to_double();
}

double objective_L(const WavelengthSet& ws, double gamma) {
    // P^2 sum lambda^-2 = |v|^2 exactly.
    const double v_sq = to_double(ws.v_norm_sq());
    const double p = ws.lcm_double();
    return v_sq + gamma * p * p / v_sq;
}

double objective_L2(std::span<const std::int64_t> p, std::span<const std::int64_t> q, double gamma,
                    const Rational& lambda_max) {
    if (p.size() != q.size() || p.empty()) throw std::invalid_argument("p and q must have equal nonzero length");
    IntVector ps;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1 || q[i] < 1) throw std::invalid_argument("p and q must be positive");
        ps.emplace_back(static_cast<long>(p[i]));
    }
    const BigInt lcm = lcm_ints(ps);
    BigInt s = lcm * lcm;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const BigInt term = BigInt(static_cast<long>(q[i])) * (lcm / ps[i]);
        s += term * term;
    }
    const double lcm_d = to_double(lcm);
    return detail::l2_from_parts(to_double(s), lcm_d * lcm_d, gamma_lmax_sq(gamma, lambda_max));
}

UpperBoundSeed initial_upper_bound(const SearchConfig& cfg, double gamma) {
    cfg.validate();
    const BigInt by_range = (cfg.r_max / cfg.lambda_max).ceil();
    const BigInt by_band = (cfg.lambda_min / (cfg.lambda_max - cfg.lambda_min)).ceil();
    const std::int64_t w = to_int64(by_range > by_band ? by_range : by_band, "seed multiplier");

    const auto free = static_cast<std::size_t>(cfg.n - 1);
    std::vector<std::int64_t> p(free, w);
    std::vector<std::int64_t> q(free, w + 1);
    const double value = objective_L2(p, q, gamma, cfg.lambda_max);
    return {value, w, p, q, wavelengths_from(p, q, cfg.lambda_max)};
}

SearchResult optimize(const SearchConfig& cfg) {
    cfg.validate();
    SearchResult result;
    result.gamma = cfg.gamma.value_or(gamma_default(cfg));
    const auto seed = initial_upper_bound(cfg, result.gamma);

    Problem pr;
    pr.start = Clock::now();
    if (cfg.time_limit) pr.deadline = pr.start + std::chrono::duration_cast<Clock::duration>(*cfg.time_limit);
    pr.free = cfg.n - 1;
    pr.big_n = cfg.n;
    pr.gamma = result.gamma;
    const Rational lmin2 = cfg.lambda_min * cfg.lambda_min;
    const Rational lmax2 = cfg.lambda_max * cfg.lambda_max;
    pr.gamma_b = result.gamma * (lmin2 * lmax2 / (lmin2 + Rational(static_cast<long>(cfg.n - 1)) * lmax2)).to_double();
    pr.glsq = gamma_lmax_sq(result.gamma, cfg.lambda_max);
    const Rational ratio = cfg.lambda_max / cfg.lambda_min;
    pr.ratio_num = to_int64(ratio.num(), "lambda_max/lambda_min numerator");
    pr.ratio_den = to_int64(ratio.den(), "lambda_max/lambda_min denominator");
    const BigInt threshold = (cfg.r_max / cfg.lambda_max).ceil();
    pr.range_threshold = threshold.fits_ulong_p() ? threshold.get_ui() : std::numeric_limits<std::uint64_t>::max();
    pr.kappa = cfg.kappa;
    pr.lambda_max = cfg.lambda_max;
    pr.bound.store(seed.l_tilde);
    pr.history.push_back(seed.l_tilde);

    std::vector<TopLevelResult> tops;
    std::mutex tops_mutex;
    std::atomic<std::int64_t> next_p2{1};
    std::atomic<std::uint64_t> nodes{0};

    auto work = [&] {
        Walker walker(pr, seed.l_tilde);
        for (;;) {
            if (pr.stop.load(std::memory_order_relaxed)) break;
            const std::int64_t p2 = next_p2.fetch_add(1);
            if (pr.kappa && p2 > *pr.kappa) break;
            if (static_cast<double>(p2) * static_cast<double>(p2) > walker.p_limit()) break;
            const double before = walker.best();
            walker.run_top(p2);
            if (walker.best() < before) {
                std::lock_guard lock(tops_mutex);
                tops.push_back({p2, walker.best(), walker.best_p(), walker.best_q(), walker.found_at()});
            }
        }
        nodes += walker.nodes();
    };

    const unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }

    result.nodes_visited = nodes.load();
    result.complete = !pr.stop.load();
    result.elapsed = Clock::now() - pr.start;
    result.bound_history = std::move(pr.history);

    // Canonical winner: smallest objective, then earliest p_2 in search order.
    const TopLevelResult* winner = nullptr;
    for (const auto& t : tops) {
        if (!winner || t.value < winner->value || (t.value == winner->value && t.p2 < winner->p2)) winner = &t;
    }

    const bool seed_allowed = !cfg.kappa || seed.w_seed <= *cfg.kappa;
    if (winner) {
        result.feasible = true;
        result.p = winner->p;
        result.q = winner->q;
        result.objective = winner->value;
        result.best_found_at = winner->found_at;
    } else if (seed_allowed) {
        result.feasible = true;
        result.p = seed.p;
        result.q = seed.q;
        result.objective = seed.l_tilde;
    }
    if (result.feasible) result.wavelengths = wavelengths_from(result.p, result.q, cfg.lambda_max);
    return result;
}

}  // namespace wavesel
