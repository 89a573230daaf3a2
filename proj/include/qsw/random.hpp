#pragma once

#include <cstdint>
#include <random>

#include "qsw/bilin.hpp"

namespace qsw {

using Rng = std::mt19937_64;

/// Independent stream for restart `index` of a run seeded with `seed`.
Rng restart_rng(std::uint64_t seed, std::uint64_t index);

/// Complex Gaussian vector normalized to the unit sphere.
Vector random_unit_vector(int dim, Rng& rng);
/// rows x cols matrix with orthonormal columns, Haar distributed.
Matrix random_isometry(int rows, int cols, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);

PureState random_pure_state(const BipartiteDims& dims, Rng& rng);
PureState random_product_state(const BipartiteDims& dims, Rng& rng);
/// Random rank-`rank` density matrix from a Ginibre draw.
DensityMatrix random_density_matrix(const BipartiteDims& dims, int rank, Rng& rng);
/// Uniform-weight mixture of `count` random product states.
DensityMatrix random_separable_state(const BipartiteDims& dims, int count, Rng& rng);

}  // namespace qsw
