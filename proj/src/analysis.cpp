#include "wavesel/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wavesel {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// Series expansion, converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_sigma(double sigma_sq) {
    if (!(sigma_sq > 0.0)) throw std::domain_error("sigma^2 must be positive");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma shape must be positive");
    if (x < 0.0 || std::isnan(x)) throw std::domain_error("incomplete gamma argument must be nonnegative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double chi_square_cdf(int dof, double x) {
    if (dof < 1) throw std::domain_error("chi-square degrees of freedom must be >= 1");
    if (x < 0.0 || std::isnan(x)) throw std::domain_error("chi-square argument must be nonnegative");
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double predicted_mse(const WavelengthSet& ws, double sigma_sq) {
    if (sigma_sq < 0.0) throw std::domain_error("sigma^2 must be nonnegative");
    return sigma_sq / ws.inverse_square_sum().to_double();
}

double ball_probability_upper(int n, double det, double sigma_sq) {
    check_sigma(sigma_sq);
    const double log_radius_sq = (2.0 / n) * (std::lgamma(0.5 * n + 1.0) + std::log(det));
    return chi_square_cdf(n, std::exp(log_radius_sq) / (std::numbers::pi * sigma_sq));
}

double prob_correct_upper(const LatticeContext& ctx, double sigma_sq) {
    check_sigma(sigma_sq);
    const auto big_n = static_cast<double>(ctx.ambient_dimension());
    if (ctx.dimension() == 0) return 1.0;
    const double n = big_n - 1.0;
    const double log_num = (2.0 / n) * std::lgamma(0.5 * big_n + 0.5);
    const double log_den = (1.0 / n) * std::log(to_double(ctx.v_norm_sq()));
    const double arg = std::exp(log_num - log_den) / (sigma_sq * std::numbers::pi);
    return chi_square_cdf(static_cast<int>(ctx.dimension()), arg);
}

double ball_probability_lower(int n, double inradius, double sigma_sq, InradiusForm form) {
    check_sigma(sigma_sq);
    const double arg = form == InradiusForm::squared ? inradius * inradius / sigma_sq : inradius / sigma_sq;
    return chi_square_cdf(n, arg);
}

double prob_correct_lower(const LatticeContext& ctx, double sigma_sq, InradiusForm form) {
    const ShortVector sv = shortest_vector(ctx);
    return ball_probability_lower(static_cast<int>(ctx.dimension()), 0.5 * sv.d_min, sigma_sq, form);
}

ErrorPrediction predict_errors(const LatticeContext& ctx, double sigma_sq, InradiusForm form) {
    if (!ctx.source()) throw std::invalid_argument("lattice context carries no wavelengths");
    ErrorPrediction out;
    out.sigma_sq = sigma_sq;
    out.mse_correct = predicted_mse(*ctx.source(), sigma_sq);
    out.p_correct_upper = prob_correct_upper(ctx, sigma_sq);
    out.p_correct_lower = ctx.dimension() == 0 ? 1.0 : prob_correct_lower(ctx, sigma_sq, form);
    return out;
}

}  // namespace wavesel
