#pragma once

#include "wavesel/lattice.hpp"

namespace wavesel {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// P(chi^2_dof <= x). Throws std::domain_error for dof < 1 or x < 0.
double chi_square_cdf(int dof, double x);

/// MSE of the range estimate when unwrapping is correct: sigma^2 / sum lambda^-2.
double predicted_mse(const WavelengthSet& ws, double sigma_sq);

/// Upper bound on the probability of correct unwrapping for an n-dimensional
/// lattice of determinant det: F_n(Gamma(n/2+1)^(2/n) det^(2/n) / (pi sigma^2)).
double ball_probability_upper(int n, double det, double sigma_sq);

/// The same bound specialised to the dual lattice with det = 1/|v|:
/// F_{N-1}(Gamma(N/2+1/2)^(2/(N-1)) / (|v|^(2/(N-1)) sigma^2 pi)). Returns 1 for N == 1.
double prob_correct_upper(const LatticeContext& ctx, double sigma_sq);

enum class InradiusForm {
    squared,     ///< F_{N-1}(rho^2 / sigma^2)
    as_printed,  ///< F_{N-1}(rho / sigma^2), kept for comparison
};

/// Lower bound from the inradius rho = d_min / 2 of an n-dimensional lattice.
double ball_probability_lower(int n, double inradius, double sigma_sq, InradiusForm form = InradiusForm::squared);

/// Lower bound on the probability of correct unwrapping. Runs shortest_vector.
double prob_correct_lower(const LatticeContext& ctx, double sigma_sq, InradiusForm form = InradiusForm::squared);

struct ErrorPrediction {
    double sigma_sq = 0;
    double mse_correct = 0;
    double p_correct_upper = 0;
    double p_correct_lower = 0;
};

ErrorPrediction predict_errors(const LatticeContext& ctx, double sigma_sq,
                               InradiusForm form = InradiusForm::squared);

}  // namespace wavesel
