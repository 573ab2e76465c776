#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "numerics/matrix.hpp"

namespace argviz {

struct SvdResult {
  Matrix u;                              // rows(M) x d, orthonormal columns
  std::vector<double> singular_values;   // d values, non-increasing
  Matrix v;                              // cols(M) x d, orthonormal columns
};

struct SvdOptions {
  std::size_t oversampling = 8;
  std::size_t min_power_iterations = 4;
  // Extra power iterations are run until every returned triplet meets the
  // residual bound or this cap is reached.
  std::size_t max_power_iterations = 64;
};

// Top-d singular triplets by randomized subspace iteration. For each returned
// triplet ‖M vᵢ − σᵢ uᵢ‖ ≤ 1e-6·σ₁ + 1e-10 once the iteration has converged.
SvdResult truncated_svd(const Matrix& m, std::size_t d, std::uint64_t seed,
                        const SvdOptions& options = {});

// Largest value of ‖M vᵢ − σᵢ uᵢ‖ over the returned triplets.
double max_triplet_residual(const Matrix& m, const SvdResult& svd);

// Orthonormalizes the columns in place (two passes of modified Gram-Schmidt).
// Columns that are numerically dependent are replaced by the first standard
// basis vector that is not, so the result always has orthonormal columns.
void orthonormalize_columns(Matrix& q);

}  // namespace argviz
