#include "detail/reduction.hpp"

#include <utility>

namespace wavesel::detail {

namespace {

Rational dot(const RationalVector& a, const RationalVector& b) {
    mpq_class acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].raw() * b[i].raw();
    return Rational(std::move(acc));
}

BigInt round_nearest(const Rational& x) { return (x + Rational(BigInt(1), BigInt(2))).floor(); }

struct GramSchmidt {
    std::vector<std::vector<Rational>> mu;
    std::vector<Rational> norm_sq;  // |b*_i|^2
};

GramSchmidt orthogonalize(const std::vector<RationalVector>& b) {
    const std::size_t n = b.size();
    GramSchmidt gs;
    gs.mu.assign(n, std::vector<Rational>(n));
    gs.norm_sq.assign(n, Rational(0));
    std::vector<RationalVector> star(n);
    for (std::size_t i = 0; i < n; ++i) {
        star[i] = b[i];
        for (std::size_t j = 0; j < i; ++j) {
            gs.mu[i][j] = dot(b[i], star[j]) / gs.norm_sq[j];
            for (std::size_t k = 0; k < star[i].size(); ++k) star[i][k] -= gs.mu[i][j] * star[j][k];
        }
        gs.norm_sq[i] = dot(star[i], star[i]);
    }
    return gs;
}

}  // namespace

ReducedBasis lll_reduce(const std::vector<RationalVector>& basis) {
    const std::size_t n = basis.size();
    ReducedBasis out;
    out.basis = basis;
    out.transform.assign(n, IntVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) out.transform[i][i] = 1;
    if (n < 2) return out;

    const Rational delta(BigInt(3), BigInt(4));
    auto& b = out.basis;
    auto& t = out.transform;

    GramSchmidt gs = orthogonalize(b);
    std::size_t k = 1;
    while (k < n) {
        for (std::size_t jj = k; jj-- > 0;) {
            const BigInt q = round_nearest(gs.mu[k][jj]);
            if (q == 0) continue;
            const Rational qr(q);
            for (std::size_t r = 0; r < b[k].size(); ++r) b[k][r] -= qr * b[jj][r];
            for (std::size_t r = 0; r < n; ++r) t[k][r] -= q * t[jj][r];
            gs = orthogonalize(b);
        }
        const Rational m = gs.mu[k][k - 1];
        if (gs.norm_sq[k] >= (delta - m * m) * gs.norm_sq[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            std::swap(t[k], t[k - 1]);
            gs = orthogonalize(b);
            k = k > 1 ? k - 1 : 1;
        }
    }
    return out;
}

}  // namespace wavesel::detail
