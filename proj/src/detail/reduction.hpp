#pragma once

#include "wavesel/lattice.hpp"

#include <vector>

namespace wavesel::detail {

struct ReducedBasis {
    std::vector<RationalVector> basis;     // columns
    std::vector<IntVector> transform;      // columns; basis = input * transform
};

/// Exact LLL reduction (delta = 3/4) of the columns of `basis`.
ReducedBasis lll_reduce(const std::vector<RationalVector>& basis);

}  // namespace wavesel::detail
