#include <doctest.h>

#include "oracles.hpp"
#include "qsw/catalog.hpp"
#include "qsw/random.hpp"

using namespace qsw;

TEST_CASE("schmidt decomposition of reference states") {
  SUBCASE("product state") {
    const auto sd = schmidt_decompose(PureState::basis(BipartiteDims(2, 2), 0, 0));
    CHECK(sd.rank == 1);
    CHECK(sd.coeffs(0) == doctest::Approx(1.0));
  }
  SUBCASE("maximally entangled 3x3") {
    const auto sd = schmidt_decompose(PureState::maximally_entangled(3));
    REQUIRE(sd.rank == 3);
    for (int i = 0; i < 3; ++i) CHECK(sd.coeffs(i) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("plus-plus is a product") {
    const auto sd = schmidt_decompose(PureState(Vector::Constant(4, 0.5), BipartiteDims(2, 2)));
    CHECK(sd.rank == 1);
    CHECK(sd.coeffs(0) == doctest::Approx(1.0));
  }
  SUBCASE("non-normalized input is rejected") {
    CHECK_THROWS_AS(PureState(Vector::Constant(4, 1.0), BipartiteDims(2, 2)), ValidationError);
  }
}

TEST_CASE("schmidt decomposition invariants on random states") {
  Rng rng = restart_rng(11, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const BipartiteDims dims(2 + trial % 2, 3 + trial % 2);
    const PureState psi = random_pure_state(dims, rng);
    const auto sd = schmidt_decompose(psi);
    CHECK(sd.coeffs.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    for (int i = 1; i < sd.rank; ++i) CHECK(sd.coeffs(i) <= sd.coeffs(i - 1));
    const Matrix id_l = sd.left_vectors.adjoint() * sd.left_vectors;
    const Matrix id_r = sd.right_vectors.adjoint() * sd.right_vectors;
    CHECK(oracle::max_abs(id_l - Matrix::Identity(sd.rank, sd.rank)) < 1e-10);
    CHECK(oracle::max_abs(id_r - Matrix::Identity(sd.rank, sd.rank)) < 1e-10);
    CHECK((sd.reconstruct() - psi.amplitudes()).norm() < 1e-10);
    const auto ref = oracle::schmidt_coefficients(psi.amplitudes(), dims.m, dims.n);
    for (int i = 0; i < sd.rank; ++i) CHECK(sd.coeffs(i) == doctest::Approx(ref[i]).epsilon(1e-8));
  }
}

TEST_CASE("schmidt rank matches the amplitude-matrix rank") {
  std::mt19937_64 rng(5);
  for (int r = 1; r <= 3; ++r) {
    const Vector v = oracle::random_rank_r(3, 4, r, rng);
    CHECK(schmidt_rank(v, BipartiteDims(3, 4)) == r);
    CHECK(oracle::schmidt_rank(v, 3, 4) == r);
  }
}

TEST_CASE("partial transpose reference values") {
  SUBCASE("product operator") {
    Rng rng = restart_rng(3, 0);
    const Matrix a = random_density_matrix(BipartiteDims(1, 2), 2, rng).matrix();
    const Matrix b = random_density_matrix(BipartiteDims(1, 3), 3, rng).matrix();
    const Matrix pt = partial_transpose(kron(a, b), BipartiteDims(2, 3), Side::A);
    CHECK(oracle::max_abs(pt - kron(Matrix(a.transpose()), b)) < 1e-15);
  }
  SUBCASE("two-qubit maximally entangled state") {
    const auto rho = DensityMatrix::from_pure(PureState::maximally_entangled(2));
    const auto ev = oracle::eigenvalues(oracle::partial_transpose_a(rho.matrix(), 2, 2));
    CHECK(ev[0] == doctest::Approx(0.5));
    CHECK(ev[2] == doctest::Approx(0.5));
    CHECK(ev[3] == doctest::Approx(-0.5));
    CHECK(oracle::max_abs(partial_transpose(rho) - oracle::partial_transpose_a(rho.matrix(), 2, 2)) == 0.0);
  }
  SUBCASE("spectra of both partial transposes agree") {
    Rng rng = restart_rng(4, 0);
    for (int i = 0; i < 50; ++i) {
      const auto rho = random_density_matrix(BipartiteDims(2, 3), 1 + i % 6, rng);
      const auto a = oracle::eigenvalues(partial_transpose(rho, Side::A));
      const auto b = oracle::eigenvalues(partial_transpose(rho, Side::B));
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("partial transpose preserves trace and hermiticity") {
  Rng rng = restart_rng(8, 0);
  for (int i = 0; i < 100; ++i) {
    const auto rho = random_density_matrix(BipartiteDims(3, 3), 1 + i % 9, rng);
    const Matrix pt = partial_transpose(rho);
    CHECK(std::abs(pt.trace() - rho.matrix().trace()) < 1e-14);
    CHECK(oracle::max_abs(pt - pt.adjoint()) < 1e-14);
  }
}

TEST_CASE("swap partial transpose is m times the maximally entangled projector") {
  for (int m = 2; m <= 4; ++m) {
    const Vector phi = oracle::max_entangled(m);
    const Matrix target = double(m) * phi * phi.adjoint();
    CHECK(oracle::max_abs(partial_transpose(swap_operator(m), BipartiteDims(m, m)) - target) <= 1e-12);
    CHECK(oracle::max_abs(oracle::partial_transpose_a(oracle::swap(m), m, m) - target) <= 1e-12);
  }
}

TEST_CASE("PPT test") {
  SUBCASE("separable mixtures are PPT") {
    Rng rng = restart_rng(9, 0);
    for (int i = 0; i < 5; ++i) CHECK(is_ppt(random_separable_state(BipartiteDims(3, 3), 20, rng)).ppt);
  }
  SUBCASE("two-qubit maximally entangled state") {
    const auto res = is_ppt(DensityMatrix::from_pure(PureState::maximally_entangled(2)));
    CHECK_FALSE(res.ppt);
    CHECK(res.min_eigenvalue == doctest::Approx(-0.5));
  }
  SUBCASE("tiles state") {
    const auto res = is_ppt(catalog::upb_tiles_state().state);
    CHECK(res.ppt);
    CHECK(res.min_eigenvalue >= -1e-10);
  }
}

TEST_CASE("spectral splitting") {
  SUBCASE("identity") {
    const auto sd = spectral(Matrix::Identity(9, 9));
    CHECK(sd.rank == 9);
    CHECK(sd.kernel_basis.cols() == 0);
  }
  SUBCASE("rank-one projector") {
    const Vector v = oracle::max_entangled(3);
    const auto sd = spectral(v * v.adjoint());
    CHECK(sd.rank == 1);
    CHECK(sd.kernel_basis.cols() == 8);
  }
  SUBCASE("tiles state") {
    const auto sd = spectral(catalog::upb_tiles_state().state.matrix());
    CHECK(sd.rank == 4);
    CHECK(sd.kernel_basis.cols() == 5);
    CHECK(sd.rank == oracle::rank(catalog::upb_tiles_state().state.matrix()));
  }
  SUBCASE("non-hermitian input is rejected") {
    Matrix x = Matrix::Identity(4, 4);
    x(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral(x), ValidationError);
  }
  SUBCASE("bases are orthonormal and complementary") {
    Rng rng = restart_rng(12, 0);
    const auto rho = random_density_matrix(BipartiteDims(2, 3), 4, rng);
    const auto sd = spectral(rho.matrix());
    CHECK(sd.rank + sd.kernel_basis.cols() == 6);
    Matrix all(6, 6);
    all << sd.range_basis, sd.kernel_basis;
    CHECK(oracle::max_abs(all.adjoint() * all - Matrix::Identity(6, 6)) < 1e-10);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4), BipartiteDims(2, 2)), ValidationError);
  Matrix neg = Matrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(neg, BipartiteDims(2, 2)), ValidationError);
  CHECK_THROWS_AS(BipartiteDims(3, 2), ValidationError);
  const auto d = BipartiteDims::ordered(3, 2);
  CHECK(d.m == 2);
  CHECK(d.swapped);
}
