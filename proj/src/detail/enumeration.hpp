#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace wavesel::detail {

struct EnumResult {
    std::vector<std::int64_t> u;
    double dist_sq = 0.0;
};

/// Minimizes |c - R u|^2 over integer u; R is upper triangular with nonzero
/// diagonal. Schnorr-Euchner zig-zag order; among equal distances the first
/// point reached is kept.
EnumResult enumerate_closest(const Eigen::MatrixXd& r, const Eigen::VectorXd& c);

/// Minimizes |R u|^2 over nonzero integer u.
EnumResult enumerate_shortest(const Eigen::MatrixXd& r);

}  // namespace wavesel::detail
