#include "selftest.hpp"

#include "wavesel/estimator.hpp"
#include "wavesel/oracles.hpp"
#include "wavesel/wavesearch.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

namespace wavesel::cli {

namespace {

IntVector random_primitive(std::mt19937_64& rng, std::size_t n, long hi) {
    std::uniform_int_distribution<long> d(1, hi);
    for (;;) {
        IntVector v;
        long g = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v.emplace_back(d(rng));
            g = std::gcd(g, v.back().get_si());
        }
        if (g == 1) return v;
    }
}

bool lcm_fixtures() {
    const std::pair<const char*, const char*> cases[] = {
        {"2,3,5", "30"},
        {"30/13,15/4,5", "30"},
        {"2,3,5,7,11", "2310"},
        {"22/3,66/17,77/18,110/31,11", "2310"},
        {"101039/66,1076285/682,198036440/125389,17572/11", "198036440/11"},
    };
    for (const auto& [list, expected] : cases) {
        std::vector<Rational> xs;
        std::string_view s(list);
        for (std::size_t start = 0;;) {
            const auto end = s.find(',', start);
            xs.push_back(Rational::parse(s.substr(start, end - start)));
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        if (rational_lcm(xs) != Rational::parse(expected)) return false;
    }
    return true;
}

bool determinant_identity() {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        const auto v = random_primitive(rng, 2 + t % 5, 500);
        const auto ctx = LatticeContext::from_integer_vector(v);
        if (oracle::gram_determinant(ctx.reduced_basis()) * Rational(ctx.v_norm_sq()) != Rational(1)) return false;
    }
    return true;
}

bool closest_point_box() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + t % 3;
        const auto v = random_primitive(rng, n, 8);
        const auto ctx = LatticeContext::from_integer_vector(v);
        std::vector<double> y(n);
        for (auto& x : y) x = u(rng);
        const double a = closest_point(ctx, y).distance_sq;
        const double b = oracle::box_closest_distance(v, y, 6);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, b)) return false;
    }
    return true;
}

bool shortest_vector_box() {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto v = random_primitive(rng, 2 + t % 3, 8);
        const auto ctx = LatticeContext::from_integer_vector(v);
        if (std::abs(shortest_vector(ctx).d_min - oracle::box_shortest_length(v, 4)) > 1e-12) return false;
    }
    return true;
}

bool zero_noise_recovery() {
    const WavelengthSet ws({Rational(2), Rational(3), Rational(5)});
    const auto ctx = build_context(ws);
    for (int i = 0; i < 200; ++i) {
        const double r0 = 30.0 * i / 200.0;
        std::vector<double> y;
        for (double w : ws.reciprocals()) y.push_back(wrap(r0 * w));
        if (std::abs(wrapped_error(estimate_range(y, ctx).r_hat, r0, 30.0)) > 1e-9 * 30.0) return false;
    }
    return true;
}

bool search_box() {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 8; ++t) {
        SearchConfig cfg;
        cfg.n = 2 + t % 2;
        const long lo = 1 + static_cast<long>(rng() % 6);
        cfg.lambda_min = Rational(lo);
        cfg.lambda_max = Rational(lo + 1 + static_cast<long>(rng() % 5));
        cfg.r_max = cfg.lambda_max * Rational(1 + static_cast<long>(rng() % 6));
        const auto r = optimize(cfg);
        const auto b = oracle::box_optimum(cfg);
        const double expected = b.found ? b.objective : initial_upper_bound(cfg, r.gamma).l_tilde;
        if (!r.complete || r.objective != expected) return false;
    }
    return true;
}

}  // namespace

bool run_selftest(std::ostream& out) {
    const std::pair<const char*, std::function<bool()>> checks[] = {
        {"exact lcm of the reference wavelength sets", lcm_fixtures},
        {"dual basis determinant identity", determinant_identity},
        {"closest point against box search", closest_point_box},
        {"shortest vector against box search", shortest_vector_box},
        {"noise-free range recovery", zero_noise_recovery},
        {"search against exhaustive enumeration", search_box},
    };
    bool all = true;
    for (const auto& [name, check] : checks) {
        bool pass = false;
        try {
            pass = check();
        } catch (const std::exception&) {
            pass = false;
        }
        out << (pass ? "PASS " : "FAIL ") << name << '\n';
        all = all && pass;
    }
    return all;
}

}  // namespace wavesel::cli
