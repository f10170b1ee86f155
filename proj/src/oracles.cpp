#include "wavesel/oracles.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wavesel::oracle {

namespace {

// Q x with Q = I - vv'/|v|^2, straight from the definition.
std::vector<double> project(const std::vector<double>& v, const std::vector<double>& x) {
    double vv = 0.0, vx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        vv += v[i] * v[i];
        vx += v[i] * x[i];
    }
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - v[i] * vx / vv;
    return out;
}

// Calls f(z) for every integer z in the box center +- half_width.
template <class F>
void for_each_in_box(const std::vector<long>& center, int half_width, F&& f) {
    const std::size_t n = center.size();
    std::vector<long> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = center[i] - half_width;
    for (;;) {
        f(z);
        std::size_t i = 0;
        while (i < n && z[i] == center[i] + half_width) {
            z[i] = center[i] - half_width;
            ++i;
        }
        if (i == n) return;
        ++z[i];
    }
}

std::vector<double> as_doubles(const IntVector& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.get_d());
    return out;
}

}  // namespace

Rational determinant(std::vector<RationalVector> m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        if (m[c].size() != n) throw std::invalid_argument("matrix is not square");
        std::size_t piv = c;
        while (piv < n && m[piv][c] == Rational(0)) ++piv;
        if (piv == n) return Rational(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

Rational gram_determinant(const std::vector<RationalVector>& cols) {
    const std::size_t k = cols.size();
    std::vector<RationalVector> g(k, RationalVector(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            Rational s;
            for (std::size_t n = 0; n < cols[i].size(); ++n) s += cols[i][n] * cols[j][n];
            g[i][j] = s;
            g[j][i] = s;
        }
    }
    return determinant(std::move(g));
}

double box_closest_distance(const IntVector& v_int, std::span<const double> target, int half_width) {
    const auto v = as_doubles(v_int);
    std::vector<double> t(target.begin(), target.end());
    double vv = 0.0, vt = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        vv += v[i] * v[i];
        vt += v[i] * t[i];
    }
    const double k = std::round(vt / vv);
    std::vector<long> center(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) center[i] = std::lround(t[i] - k * v[i]);

    const auto qt = project(v, t);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> zd(t.size());
    for_each_in_box(center, half_width, [&](const std::vector<long>& z) {
        for (std::size_t i = 0; i < z.size(); ++i) zd[i] = static_cast<double>(z[i]);
        const auto qz = project(v, zd);
        double d = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) d += (qt[i] - qz[i]) * (qt[i] - qz[i]);
        best = std::min(best, d);
    });
    return best;
}

double box_shortest_length(const IntVector& v_int, int half_width) {
    const auto v = as_doubles(v_int);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> zd(v.size());
    for_each_in_box(std::vector<long>(v.size(), 0), half_width, [&](const std::vector<long>& z) {
        // Skip multiples of v exactly (those project to 0).
        std::size_t first = 0;
        while (first < z.size() && v_int[first] == 0) ++first;
        bool multiple = true;
        if (first < z.size()) {
            const BigInt zf(z[first]);
            if (!mpz_divisible_p(zf.get_mpz_t(), v_int[first].get_mpz_t())) {
                multiple = false;
            } else {
                const BigInt k = zf / v_int[first];
                for (std::size_t i = 0; i < z.size(); ++i) {
                    if (BigInt(z[i]) != k * v_int[i]) { multiple = false; break; }
                }
            }
        }
        if (multiple) return;
        for (std::size_t i = 0; i < z.size(); ++i) zd[i] = static_cast<double>(z[i]);
        const auto qz = project(v, zd);
        double d = 0.0;
        for (double x : qz) d += x * x;
        best = std::min(best, d);
    });
    return std::sqrt(best);
}

BruteForceOptimum box_optimum(const SearchConfig& cfg) {
    cfg.validate();
    const double gamma = cfg.gamma.value_or(gamma_default(cfg));
    const auto seed = initial_upper_bound(cfg, gamma);

    const Rational lmin2 = cfg.lambda_min * cfg.lambda_min;
    const Rational lmax2 = cfg.lambda_max * cfg.lambda_max;
    const double b = (lmin2 * lmax2 / (lmin2 + Rational(static_cast<long>(cfg.n - 1)) * lmax2)).to_double();
    auto p_hi = static_cast<std::int64_t>(std::floor(std::sqrt((seed.l_tilde - gamma * b) / cfg.n)));
    if (cfg.kappa) p_hi = std::min(p_hi, *cfg.kappa);
    const Rational ratio = cfg.lambda_max / cfg.lambda_min;
    const Rational range = cfg.r_max / cfg.lambda_max;

    const auto free = static_cast<std::size_t>(cfg.n - 1);
    BruteForceOptimum out;
    out.objective = seed.l_tilde;
    if (p_hi < 1) return out;

    std::vector<std::int64_t> p(free, 1), q(free, 1);
    // Odometer over p, then over q for each p.
    for (;;) {
        std::vector<std::int64_t> q_hi(free);
        for (std::size_t i = 0; i < free; ++i) {
            q_hi[i] = (Rational(static_cast<long>(p[i])) * ratio).floor().get_si();
            q[i] = p[i];
        }
        IntVector ps;
        for (auto x : p) ps.emplace_back(static_cast<long>(x));
        const bool range_ok = Rational(lcm_ints(ps)) >= range;
        if (range_ok) {
            for (;;) {
                bool coprime = true;
                for (std::size_t i = 0; i < free; ++i) coprime = coprime && std::gcd(p[i], q[i]) == 1;
                if (coprime) {
                    ++out.candidates;
                    const double value = objective_L2(p, q, gamma, cfg.lambda_max);
                    if (value < out.objective) {
                        out.objective = value;
                        out.p = p;
                        out.q = q;
                        out.found = true;
                    }
                }
                std::size_t i = 0;
                while (i < free && q[i] == q_hi[i]) {
                    q[i] = p[i];
                    ++i;
                }
                if (i == free) break;
                ++q[i];
            }
        }
        std::size_t i = 0;
        while (i < free && p[i] == p_hi) {
            p[i] = 1;
            ++i;
        }
        if (i == free) break;
        ++p[i];
    }
    return out;
}

}  // namespace wavesel::oracle
