#pragma once

#include <optional>
#include <vector>

#include "neighborlat/lattice.hpp"

namespace neighborlat {

/// Every nonzero x with 0 < (x, x) <= bound, for a positive definite Gram
/// matrix (Fincke-Pohst). Both x and -x are listed.
std::vector<IntVector> short_vectors(const IntMatrix& gram, const Integer& bound,
                                     std::int64_t max_count = 10000000);

/// Unimodular T with T * gram * T^T LLL-reduced; positive definite only.
IntMatrix lll_transform(const IntMatrix& gram, double delta = 0.99);

/// X with X * G_b * X^T = G_a, found by backtracking over short vectors of b;
/// definite lattices only.
std::optional<IntMatrix> find_isometry(const Lattice& a, const Lattice& b);

}  // namespace neighborlat
