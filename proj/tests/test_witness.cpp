#include <doctest.h>

#include "oracles.hpp"
#include "qsw/catalog.hpp"
#include "qsw/edge.hpp"
#include "qsw/random.hpp"
#include "qsw/witness.hpp"

using namespace qsw;

namespace {

rankopt::OptimizerConfig cfg_with(int restarts, std::uint64_t seed = 3) {
  rankopt::OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

DensityMatrix psi_plus(int m) { return DensityMatrix::from_pure(PureState::maximally_entangled(m)); }

}  // namespace

TEST_CASE("evaluation of isotropic witnesses") {
  const auto w32 = witness::isotropic_witness(3, 2, cfg_with(16));
  const auto w33 = witness::isotropic_witness(3, 3, cfg_with(16));
  CHECK(witness::evaluate(w32, psi_plus(3)).value == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(witness::evaluate(w33, psi_plus(3)).value == doctest::Approx(-0.5).epsilon(1e-12));
  const auto tangent = DensityMatrix::from_pure(PureState::basis(BipartiteDims(3, 3), 0, 0));
  CHECK(std::abs(witness::evaluate(w32, tangent).value) < 1e-12);
  CHECK(witness::evaluate(w32, tangent).imag_residue < 1e-10);
  CHECK(witness::evaluate(witness::isotropic_witness(2, 2, cfg_with(8)), psi_plus(2)).value ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(witness::evaluate(w32, psi_plus(2)), ValidationError);
}

TEST_CASE("isotropic witness spectrum") {
  for (int m = 2; m <= 4; ++m)
    for (int k = 2; k <= m; ++k) {
      const auto ev = oracle::eigenvalues(witness::isotropic_matrix(m, k));
      for (int i = 0; i + 1 < m * m; ++i) CHECK(ev[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(ev.back() == doctest::Approx(1.0 - double(m) / (k - 1)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(witness::isotropic_witness(3, 4), ValidationError);
  CHECK_THROWS_AS(witness::isotropic_witness(3, 1), ValidationError);
}

TEST_CASE("certification rejects non-witnesses") {
  const Vector v = oracle::max_entangled(3);
  const Matrix too_strong = Matrix::Identity(9, 9) - 4.0 * v * v.adjoint();
  CHECK_THROWS_AS(witness::Witness::certify(too_strong, BipartiteDims(3, 3), 2, witness::Provenance::User, cfg_with(16)),
                  CertificationError);
  CHECK_THROWS_AS(witness::Witness::certify(Matrix::Identity(9, 9), BipartiteDims(3, 3), 2,
                                            witness::Provenance::User, cfg_with(4)),
                  ValidationError);
}

TEST_CASE("antisymmetric decomposition of the isotropic witness") {
  for (int m = 2; m <= 4; ++m)
    for (int k = 2; k <= m; ++k) {
      const auto cert = witness::antisymmetric_decomposition(m, k);
      CHECK(cert.residual <= 1e-12);
      CHECK(oracle::min_eigenvalue(cert.p_part) >= -1e-10);
      CHECK(oracle::min_eigenvalue(cert.q_part) >= -1e-10);
      // independent rebuild through the explicit swap operator
      const Matrix pa = 0.5 * (Matrix::Identity(m * m, m * m) - oracle::swap(m));
      const Matrix rebuilt = (1.0 - 1.0 / (k - 1)) * Matrix::Identity(m * m, m * m) +
                             (2.0 / (k - 1)) * oracle::partial_transpose_a(pa, m, m);
      CHECK(oracle::max_abs(rebuilt - witness::isotropic_matrix(m, k)) <= 1e-12);
    }
  const auto c32 = witness::antisymmetric_decomposition(3, 2);
  CHECK(oracle::max_abs(c32.p_part) <= 1e-15);
  const auto c33 = witness::antisymmetric_decomposition(3, 3);
  CHECK(oracle::max_abs(c33.p_part - 0.5 * Matrix::Identity(9, 9)) <= 1e-15);
}

TEST_CASE("canonical form of isotropic witnesses") {
  const Vector v = oracle::max_entangled(3);
  SUBCASE("class 2") {
    const auto cf = witness::canonical_form(witness::isotropic_witness(3, 2, cfg_with(16)), cfg_with(16));
    CHECK(cf.epsilon == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(oracle::max_abs(cf.w_tilde - 3.0 * (Matrix::Identity(9, 9) - v * v.adjoint())) <= 1e-12);
    REQUIRE(cf.kernel_basis.cols() == 1);
    CHECK(std::abs(cf.kernel_basis.col(0).dot(v)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(rankopt::find_product_vector(cf.kernel_basis, BipartiteDims(3, 3), cfg_with(16)).found);
    CHECK(cf.certified);
  }
  SUBCASE("class 3") {
    const auto cf = witness::canonical_form(witness::isotropic_witness(3, 3, cfg_with(16)), cfg_with(16));
    CHECK(cf.epsilon == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(cf.kernel_basis.cols() == 1);
    CHECK(std::abs(cf.kernel_basis.col(0).dot(v)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("round trip on random witnesses") {
    Rng rng = restart_rng(17, 0);
    for (int i = 0; i < 20; ++i) {
      const Matrix g = random_density_matrix(BipartiteDims(3, 3), 2, rng).matrix();
      const auto w = witness::Witness::certify(witness::isotropic_matrix(3, 2) + 0.2 * g, BipartiteDims(3, 3), 2,
                                               witness::Provenance::User, cfg_with(8, i));
      const auto cf = witness::canonical_form(w, cfg_with(8, i));
      CHECK(oracle::max_abs(cf.w_tilde - cf.epsilon * Matrix::Identity(9, 9) - w.matrix()) <= 1e-12);
      CHECK(std::abs(oracle::min_eigenvalue(cf.w_tilde)) <= 1e-12);
    }
  }
}

TEST_CASE("edge witnesses detect rank-4 edge states") {
  for (const auto& name : {"upb_tiles", "chessboard"}) {
    CAPTURE(name);
    const auto entry = catalog::make(name);
    const auto ew = witness::witness_from_edge(PositiveOperator(entry.state), 2, cfg_with(64));
    CHECK(witness::evaluate(ew.witness, entry.state).value < 0.0);
    CHECK(ew.witness.certification().min_value >= -1e-6);
    CHECK(ew.epsilon > 0.0);
    CHECK(ew.c == doctest::Approx(1.0));
    const auto check = rankopt::extremal_overlap(ew.witness.matrix(), BipartiteDims(3, 3), 1, rankopt::Extremum::Min,
                                                 cfg_with(64, 1234));
    CHECK(check.value >= -1e-6);
  }
}

TEST_CASE("edge witness from a greedy extraction of the alpha = 4 state") {
  const auto entry = catalog::horodecki_alpha_state(4.0);
  const auto cfg = cfg_with(32);
  const auto dec = edge::edge_decompose(entry.state, 2, cfg);
  REQUIRE_FALSE(dec.fully_decomposed);
  const auto ew = witness::witness_from_edge(dec.delta, 2, cfg);
  CHECK(witness::evaluate(ew.witness, dec.delta.normalized()).value < 0.0);
  // product components contribute non-negatively
  CHECK(witness::evaluate(ew.witness, entry.state).value >=
        dec.p * witness::evaluate(ew.witness, dec.delta.normalized()).value - 1e-6);
}

TEST_CASE("edge witness rejects states whose range holds a product vector") {
  const auto rho = DensityMatrix::maximally_mixed(BipartiteDims(3, 3));
  CHECK_THROWS_AS(witness::witness_from_edge(PositiveOperator(rho), 2, cfg_with(8)), CertificationError);
}

TEST_CASE("detection transfers from a mixture to its edge part") {
  const auto cfg = cfg_with(32);
  const auto tiles = catalog::upb_tiles_state().state;
  const auto ew = witness::witness_from_edge(PositiveOperator(tiles), 2, cfg);
  Rng rng = restart_rng(23, 0);
  int detected = 0;
  for (int i = 0; i < 5; ++i) {
    const auto sep = random_separable_state(BipartiteDims(3, 3), 6, rng);
    const double p = 0.9 + 0.02 * i;
    const auto rho = DensityMatrix::from_operator((1 - p) * sep.matrix() + p * tiles.matrix(), BipartiteDims(3, 3));
    if (witness::evaluate(ew.witness, rho).value >= 0.0) continue;
    ++detected;
    CHECK(witness::evaluate(ew.witness, tiles).value < 0.0);
  }
  CHECK(detected > 0);
}

TEST_CASE("decomposability check on rank-8 operators") {
  const BipartiteDims dims(3, 3);
  SUBCASE("complement of the maximally entangled line") {
    const Vector v = oracle::max_entangled(3);
    const Matrix q = 3.0 * (Matrix::Identity(9, 9) - v * v.adjoint());
    const auto res = witness::decomposability_check(q, 2.0);
    for (int i = 0; i < 3; ++i) CHECK(res.kernel_coeffs(i) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.bound == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(res.decomposable);
  }
  SUBCASE("ratio above the bound") {
    Vector k = Vector::Zero(9);
    k(0) = 0.8;
    k(4) = 0.5;
    k(8) = std::sqrt(1.0 - 0.89);
    const Matrix comp = rankopt::orthogonal_complement(k, 9);
    Matrix q = Matrix::Zero(9, 9);
    for (int i = 0; i < 8; ++i) q += (1.0 + 4.0 * i / 7.0) * comp.col(i) * comp.col(i).adjoint();
    const auto res = witness::decomposability_check(hermitian_part(q), 0.1);
    CHECK(res.ratio == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(res.bound == doctest::Approx(1.0 + 0.25 / 0.11).epsilon(1e-10));
    CHECK_FALSE(res.decomposable);
    CHECK(res.lambda_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.spectral_condition == (res.lambda_min * (1 - 0.64) >= 0.1));
    const auto strict = witness::decomposability_check(hermitian_part(q), 0.5);
    CHECK_FALSE(strict.decomposable);
    CHECK_FALSE(strict.spectral_condition);
  }
  SUBCASE("kernel vector of Schmidt rank two is rejected") {
    Vector k = Vector::Zero(9);
    k(0) = k(4) = 1.0 / std::sqrt(2.0);
    const Matrix comp = rankopt::orthogonal_complement(k, 9);
    CHECK_THROWS_AS(witness::decomposability_check(comp * comp.adjoint(), 0.1), ValidationError);
  }
  SUBCASE("other shapes are rejected") {
    CHECK_THROWS_AS(witness::decomposability_check(Matrix::Identity(4, 4), 0.1), ValidationError);
  }
}
