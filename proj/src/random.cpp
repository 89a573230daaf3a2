#include "qsw/random.hpp"

#include <array>

namespace qsw {

namespace {

Matrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

}  // namespace

Rng restart_rng(std::uint64_t seed, std::uint64_t index) {
  std::array<std::uint32_t, 4> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                     static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

Vector random_unit_vector(int dim, Rng& rng) {
  Vector v = gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_isometry(int rows, int cols, Rng& rng) {
  const Matrix g = gaussian(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  // Fix column phases by the diagonal of R so the draw is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_unitary(int dim, Rng& rng) { return random_isometry(dim, dim, rng); }

PureState random_pure_state(const BipartiteDims& dims, Rng& rng) {
  return PureState::normalized(random_unit_vector(dims.total(), rng), dims);
}

PureState random_product_state(const BipartiteDims& dims, Rng& rng) {
  const Vector a = random_unit_vector(dims.m, rng);
  const Vector b = random_unit_vector(dims.n, rng);
  return PureState::normalized(kron(a, b), dims);
}

DensityMatrix random_density_matrix(const BipartiteDims& dims, int rank, Rng& rng) {
  const Matrix g = gaussian(dims.total(), rank, rng);
  return DensityMatrix::from_operator(g * g.adjoint(), dims);
}

DensityMatrix random_separable_state(const BipartiteDims& dims, int count, Rng& rng) {
  Matrix acc = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < count; ++i) acc += random_product_state(dims, rng).projector();
  return DensityMatrix::from_operator(acc, dims);
}

}  // namespace qsw
