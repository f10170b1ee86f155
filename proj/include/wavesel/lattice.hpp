#pragma once

#include "wavesel/exactnum.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wavesel {

using IntVector = std::vector<BigInt>;
using RationalVector = std::vector<Rational>;

/// N positive wavelengths with their exact lcm P and the integer vector
/// v = P * (1/lambda_1, ..., 1/lambda_N). gcd(v) == 1 by construction.
class WavelengthSet {
public:
    explicit WavelengthSet(std::vector<Rational> lambdas);

    [[nodiscard]] std::size_t size() const { return lambdas_.size(); }
    [[nodiscard]] const std::vector<Rational>& lambdas() const { return lambdas_; }
    [[nodiscard]] const Rational& lcm() const { return lcm_; }
    [[nodiscard]] const IntVector& v() const { return v_; }
    [[nodiscard]] const BigInt& v_norm_sq() const { return v_norm_sq_; }

    [[nodiscard]] double lcm_double() const { return lcm_d_; }
    /// 1/lambda_n as doubles.
    [[nodiscard]] const std::vector<double>& reciprocals() const { return w_; }
    /// Sum of lambda_n^-2, exact.
    [[nodiscard]] Rational inverse_square_sum() const;

    /// Comma separated, exact ("5, 30/13, 15/4").
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Rational> lambdas_;
    Rational lcm_;
    IntVector v_;
    BigInt v_norm_sq_;
    double lcm_d_ = 0.0;
    std::vector<double> w_;
};

struct LatticeOptions {
    /// LLL (delta = 3/4) on the dual basis before enumeration. Affects speed
    /// only; closest_point/shortest_vector results are the same either way.
    bool reduce = true;
};

/// The dual lattice {Qz : z in Z^N}, Q = I - vv'/|v|^2, as an (N-1)-dimensional
/// lattice inside the hyperplane orthogonal to v. Immutable once built.
class LatticeContext {
public:
    /// N x N integer matrix with determinant +-1 whose first column is v.
    [[nodiscard]] const std::vector<IntVector>& unimodular() const { return unimodular_; }
    /// Columns Q u_2, ..., Q u_N in exact arithmetic (length N each).
    [[nodiscard]] const std::vector<RationalVector>& dual_basis() const { return dual_basis_; }
    /// Reduced basis used by the decoder, exact and as doubles (N x (N-1)).
    [[nodiscard]] const std::vector<RationalVector>& reduced_basis() const { return reduced_basis_; }
    [[nodiscard]] const Eigen::MatrixXd& basis() const { return basis_; }
    /// Integer N x (N-1) matrix taking decoder coordinates u to z with Qz = basis() * u.
    [[nodiscard]] const std::vector<IntVector>& coefficient_map() const { return coeff_map_; }

    [[nodiscard]] std::size_t ambient_dimension() const { return v_.size(); }
    [[nodiscard]] std::size_t dimension() const { return v_.size() - 1; }
    [[nodiscard]] const IntVector& v() const { return v_; }
    [[nodiscard]] const BigInt& v_norm_sq() const { return v_norm_sq_; }
    /// det of the dual lattice, 1/|v|.
    [[nodiscard]] double det_dual() const;

    /// Wavelengths the context was built from; empty for from_integer_vector.
    [[nodiscard]] const std::optional<WavelengthSet>& source() const { return source_; }

    /// Projects x onto the hyperplane orthogonal to v.
    [[nodiscard]] Eigen::VectorXd project(std::span<const double> x) const;

    [[nodiscard]] const Eigen::MatrixXd& r_factor() const { return r_; }
    [[nodiscard]] const Eigen::MatrixXd& q_factor() const { return q_; }

    /// Builds the context for an arbitrary primitive integer vector v.
    static LatticeContext from_integer_vector(IntVector v, LatticeOptions options = {});

private:
    friend LatticeContext build_context(const WavelengthSet& ws, LatticeOptions options);

    LatticeContext() = default;
    void build(IntVector v, LatticeOptions options);

    std::optional<WavelengthSet> source_;
    IntVector v_;
    BigInt v_norm_sq_;
    std::vector<double> v_d_;
    double v_norm_sq_d_ = 0.0;
    std::vector<IntVector> unimodular_;
    std::vector<RationalVector> dual_basis_;
    std::vector<RationalVector> reduced_basis_;
    std::vector<IntVector> coeff_map_;
    Eigen::MatrixXd basis_;
    Eigen::MatrixXd q_;
    Eigen::MatrixXd r_;
};

LatticeContext build_context(const WavelengthSet& ws, LatticeOptions options = {});

struct ClosestPoint {
    IntVector z;             ///< minimizer of |Q target - Q z|^2, reduced so |z.v| <= |v|^2/2
    double distance_sq = 0;  ///< |Q target - Q z|^2
};

/// Closest point of the dual lattice to Q*target (Schnorr-Euchner enumeration).
ClosestPoint closest_point(const LatticeContext& ctx, std::span<const double> target);

struct ShortVector {
    Eigen::VectorXd vector;  ///< nonzero lattice point of minimal norm, length N
    IntVector z;             ///< integer preimage: vector == Q z
    double d_min = 0;        ///< its Euclidean length
};

/// Exact shortest nonzero vector. Throws std::domain_error for N == 1.
ShortVector shortest_vector(const LatticeContext& ctx);

/// Unimodular integer matrix (as columns) with first column v; gcd(v) must be 1.
std::vector<IntVector> unimodular_completion(const IntVector& v);

}  // namespace wavesel
