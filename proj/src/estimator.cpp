#include "wavesel/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace wavesel {

RangeEstimate estimate_range(std::span<const double> y, const LatticeContext& ctx) {
    const auto& source = ctx.source();
    if (!source) throw std::invalid_argument("lattice context carries no wavelengths");
    const WavelengthSet& ws = *source;
    if (y.size() != ws.size()) throw std::invalid_argument("phase vector length does not match wavelengths");
    for (double yn : y) {
        if (!(yn >= -0.5 && yn < 0.5)) throw std::invalid_argument("phases must lie in [-1/2, 1/2)");
    }

    ClosestPoint cp = closest_point(ctx, y);

    // r_hat = P (y.v - zeta.v) / |v|^2. The integer part zeta.v is reduced
    // modulo |v|^2 exactly, which is reduction of r_hat modulo P.
    const auto& v = ws.v();
    double yv = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) yv += y[i] * to_double(v[i]);
    BigInt m = 0;
    for (std::size_t i = 0; i < v.size(); ++i) m += cp.z[i] * v[i];
    BigInt m_mod;
    mpz_fdiv_r(m_mod.get_mpz_t(), m.get_mpz_t(), ws.v_norm_sq().get_mpz_t());

    const double norm_sq = to_double(ws.v_norm_sq());
    double frac = yv / norm_sq - Rational(m_mod, ws.v_norm_sq()).to_double();
    frac -= std::floor(frac);
    double r_hat = ws.lcm_double() * frac;
    if (r_hat >= ws.lcm_double()) r_hat = 0.0;

    return {r_hat, std::move(cp.z), cp.distance_sq};
}

bool unwrap_correct(const IntVector& zeta_hat, const IntVector& zeta_true, const WavelengthSet& ws) {
    const auto& v = ws.v();
    if (zeta_hat.size() != v.size() || zeta_true.size() != v.size()) {
        throw std::invalid_argument("wrapping variable length mismatch");
    }
    // v > 0 componentwise, so k is fixed by the first coordinate.
    const BigInt d0 = zeta_hat[0] - zeta_true[0];
    if (!mpz_divisible_p(d0.get_mpz_t(), v[0].get_mpz_t())) return false;
    BigInt k;
    mpz_divexact(k.get_mpz_t(), d0.get_mpz_t(), v[0].get_mpz_t());
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (zeta_hat[i] - zeta_true[i] != k * v[i]) return false;
    }
    return true;
}

}  // namespace wavesel
