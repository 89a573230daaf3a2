#include <cstdlib>

#include <doctest.h>

#include "oracles.hpp"
#include "qsw/catalog.hpp"
#include "qsw/random.hpp"
#include "qsw/report.hpp"

using namespace qsw;
using io::json;

namespace {

rankopt::OptimizerConfig cfg_with(int restarts, std::uint64_t seed = 29) {
  rankopt::OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("state round trip through JSON") {
  Rng rng = restart_rng(131, 0);
  for (int i = 0; i < 5; ++i) {
    const auto rho = random_density_matrix(BipartiteDims(2 + i % 2, 3), 4, rng);
    const auto back = io::state_from_json(json::parse(io::to_json(rho).dump()));
    CHECK(back.dims().m == rho.dims().m);
    CHECK(back.dims().n == rho.dims().n);
    CHECK(oracle::max_abs(back.matrix() - rho.matrix()) == 0.0);
  }
}

TEST_CASE("pure-state blocks are accepted as states") {
  const auto psi = PureState::maximally_entangled(3);
  const auto rho = io::state_from_json(io::to_json(psi));
  CHECK(oracle::max_abs(rho.matrix() - psi.projector()) <= 1e-15);
}

TEST_CASE("witness round trip keeps matrix and metadata") {
  const auto w = witness::isotropic_witness(3, 3, cfg_with(16));
  const auto back = io::witness_from_json(io::to_json(w));
  CHECK(back.k() == 3);
  CHECK(back.provenance() == witness::Provenance::Isotropic);
  CHECK(oracle::max_abs(back.matrix() - w.matrix()) == 0.0);
}

TEST_CASE("malformed JSON input is a validation error") {
  CHECK_THROWS_AS(io::state_from_json(json::parse(R"({"re": [[1]]})")), ValidationError);
  CHECK_THROWS_AS(io::state_from_json(json::parse(R"({"dims": [2, 2], "re": [[1, 0], [0, 1]]})")), ValidationError);
  CHECK_THROWS_AS(io::state_from_json(json::parse(R"({"dims": [1, 2], "re": [["a", 0], [0, 1]]})")), ValidationError);
  CHECK_THROWS_AS(io::read_file("/nonexistent/state.json"), ValidationError);
}

TEST_CASE("classification of reference states") {
  const auto cfg = cfg_with(32);
  SUBCASE("maximally entangled 3x3") {
    const auto b = report::classify(DensityMatrix::from_pure(PureState::maximally_entangled(3)), cfg);
    CHECK(b.lower == 3);
    CHECK(b.upper == 3);
    CHECK(b.lower_certificate["isotropic_value"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
  }
  SUBCASE("maximally mixed 3x3") {
    const auto b = report::classify(DensityMatrix::maximally_mixed(BipartiteDims(3, 3)), cfg);
    CHECK(b.lower == 1);
    CHECK(b.upper == 1);
  }
  SUBCASE("tiles state") {
    const auto b = report::classify(catalog::upb_tiles_state().state, cfg);
    CHECK(b.lower == 2);
    CHECK(b.upper == 2);
    CHECK(b.lower_certificate["value"].get<double>() < -1e-4);
    CHECK(b.upper_certificate["method"] == "rank4_construction");
  }
  SUBCASE("two-qubit NPPT state") {
    const auto b = report::classify(DensityMatrix::from_pure(PureState::maximally_entangled(2)), cfg);
    CHECK(b.lower == 2);
    CHECK(b.upper == 2);
  }
  SUBCASE("k_max caps the sweep") {
    report::ClassifyOptions opts;
    opts.k_max = 2;
    const auto b = report::classify(DensityMatrix::from_pure(PureState::maximally_entangled(3)), cfg, opts);
    CHECK(b.lower <= 2);
    CHECK(b.upper == 3);
  }
}

TEST_CASE("classification bounds are ordered on random states") {
  Rng rng = restart_rng(141, 0);
  for (int i = 0; i < 4; ++i) {
    const auto rho = random_density_matrix(BipartiteDims(2, 3), 2 + i, rng);
    const auto b = report::classify(rho, cfg_with(16, i));
    CHECK(1 <= b.lower);
    CHECK(b.lower <= b.upper);
    CHECK(b.upper <= 2);
  }
}

TEST_CASE("reports are deterministic across worker counts") {
  const auto cfg = cfg_with(16, 7);
  const auto rho = catalog::upb_tiles_state().state;
  setenv("QSW_THREADS", "1", 1);
  const std::string one = report::to_json(report::classify(rho, cfg), rho, cfg).dump();
  setenv("QSW_THREADS", "4", 1);
  const std::string four = report::to_json(report::classify(rho, cfg), rho, cfg).dump();
  unsetenv("QSW_THREADS");
  CHECK(one == four);
}
