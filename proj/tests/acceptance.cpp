// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qsw/catalog.hpp"
#include "qsw/edge.hpp"
#include "qsw/random.hpp"
#include "qsw/report.hpp"
#include "qsw/witness.hpp"

using namespace qsw;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail << " [failed: " << what << "]";
  }
};

rankopt::OptimizerConfig cfg_with(int restarts, std::uint64_t seed = 2024) {
  rankopt::OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void overlap_law(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int m = 2; m <= 4; ++m) {
    const Vector phi = oracle::max_entangled(m);
    const Matrix p = phi * phi.adjoint();
    for (int r = 1; r <= m; ++r) {
      const auto res = rankopt::extremal_overlap(p, BipartiteDims(m, m), r, rankopt::Extremum::Max, cfg_with(32));
      worst = std::max(worst, std::abs(res.value - double(r) / m));
    }
  }
  const double elapsed = seconds_since(t0);
  out.detail << "max deviation " << worst << ", " << elapsed << " s";
  out.require(worst <= 1e-6, "deviation above 1e-6");
  out.require(elapsed < 30.0, "slower than 30 s");
}

void isotropic_contract(Outcome& out) {
  double worst_min = 0.0, worst_eval = 0.0;
  for (int m = 2; m <= 4; ++m)
    for (int k = 2; k <= m; ++k) {
      const Matrix w = witness::isotropic_matrix(m, k);
      const auto res = rankopt::extremal_overlap(w, BipartiteDims(m, m), k - 1, rankopt::Extremum::Min, cfg_with(64));
      worst_min = std::max(worst_min, std::abs(res.value));
      const auto psi = DensityMatrix::from_pure(PureState::maximally_entangled(m));
      const double value = witness::evaluate(w, psi).value;
      worst_eval = std::max(worst_eval, std::abs(value - (1.0 - double(m) / (k - 1))));
    }
  out.detail << "max |min| " << worst_min << ", max evaluation error " << worst_eval;
  out.require(worst_min <= 1e-6, "minimum outside [-1e-6, 1e-6]");
  out.require(worst_eval <= 1e-12, "evaluation off by more than 1e-12");
}

void decomposability_identity(Outcome& out) {
  double worst = 0.0, worst_swap = 0.0;
  for (int m = 2; m <= 4; ++m) {
    const Matrix id = Matrix::Identity(m * m, m * m);
    const Vector phi = oracle::max_entangled(m);
    worst_swap = std::max(worst_swap, oracle::max_abs(oracle::partial_transpose_a(oracle::swap(m), m, m) -
                                                      double(m) * phi * phi.adjoint()));
    const Matrix pa = 0.5 * (id - oracle::swap(m));
    for (int k = 2; k <= m; ++k) {
      const Matrix rhs = (1.0 - 1.0 / (k - 1)) * id + (2.0 / (k - 1)) * oracle::partial_transpose_a(pa, m, m);
      worst = std::max(worst, oracle::max_abs(witness::isotropic_matrix(m, k) - rhs));
      const auto cert = witness::antisymmetric_decomposition(m, k);
      worst = std::max(worst, cert.residual);
    }
  }
  out.detail << "identity residual " << worst << ", swap residual " << worst_swap;
  out.require(worst <= 1e-12, "identity residual above 1e-12");
  out.require(worst_swap <= 1e-12, "swap residual above 1e-12");
}

void rank4_reproduction(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = cfg_with(64);
  for (const char* name : {"upb_tiles", "chessboard"}) {
    const auto delta = catalog::make(name).state;
    const auto cert = edge::rank4_schmidt2(delta, cfg);
    double tail = 0.0;
    for (const auto& comp : cert.components)
      tail = std::max(tail, schmidt_tail(comp.second.amplitudes(), comp.second.dims(), 2));
    const auto ew = witness::witness_from_edge(PositiveOperator(delta), 2, cfg);
    const double violation = witness::evaluate(ew.witness, delta).value;
    const auto bounds = report::classify(delta, cfg);
    out.detail << name << ": " << cert.components.size() << " components, tail " << tail << ", error "
               << cert.reconstruction_error << ", witness " << violation << ", bounds [" << bounds.lower << ","
               << bounds.upper << "]; ";
    out.require(tail <= 1e-7, std::string(name) + " tail");
    out.require(cert.reconstruction_error <= 1e-8, std::string(name) + " reconstruction");
    out.require(violation < -1e-4, std::string(name) + " witness violation");
    out.require(bounds.lower == 2 && bounds.upper == 2, std::string(name) + " bounds");
  }
  const double elapsed = seconds_since(t0);
  out.detail << elapsed << " s";
  out.require(elapsed < 120.0, "slower than 2 min");
}

void edge_witness_pipeline(Outcome& out) {
  const auto cfg = cfg_with(64);
  int checked = 0;
  for (const auto& fam : catalog::families()) {
    if (!fam.ppt_entangled) continue;
    const auto delta = edge::ppt_edge_state(catalog::make(fam.name).state, cfg);
    if (spectral(delta.matrix()).rank != 4) continue;
    ++checked;
    const auto ew = witness::witness_from_edge(PositiveOperator(delta), 2, cfg);
    const double value = witness::evaluate(ew.witness, delta).value;
    const double certified = ew.witness.certification().min_value;
    const auto recheck = rankopt::extremal_overlap(ew.witness.matrix(), delta.dims(), 1, rankopt::Extremum::Min,
                                                   cfg_with(64, 77));
    out.detail << fam.name << ": value " << value << ", product minimum " << std::min(certified, recheck.value)
               << "; ";
    out.require(value < 0.0, fam.name + " not detected");
    out.require(certified >= -1e-6 && recheck.value >= -1e-6, fam.name + " certification");
  }
  out.detail << checked << " rank-4 edge states";
  out.require(checked >= 2, "fewer than two rank-4 edge states");
}

void rank2_evidence(Outcome& out) {
  const auto cfg = cfg_with(32);
  for (const char* name : {"horodecki_alpha", "horodecki_1997"}) {
    const auto delta = edge::ppt_edge_state(catalog::make(name).state, cfg);
    const auto res = edge::rank2_violation_search(delta, cfg);
    const int r = oracle::rank(delta.matrix());
    const int r_pt = oracle::rank(oracle::partial_transpose_a(delta.matrix(), 3, 3));
    out.detail << name << ": ranks (" << r << "," << r_pt << "), L " << res.l_count;
    out.require(res.l_count == 27 - r - 2 * r_pt, std::string(name) + " L-count");
    if (!res.found) {
      out.detail << ", none found; ";
      out.require(false, std::string(name) + " no candidate");
      continue;
    }
    const auto& c = *res.found;
    const double residual = std::max({c.residual_p, c.residual_q1, c.residual_q2});
    out.detail << ", value " << c.value << ", residual " << residual << "; ";
    out.require(c.value <= 1e-8, std::string(name) + " value");
    out.require(residual <= 1e-6, std::string(name) + " residual");
    out.require(oracle::schmidt_rank(c.psi.amplitudes(), 3, 3) <= 2, std::string(name) + " Schmidt rank");
  }
}

void alpha_boundary(Outcome& out) {
  for (double alpha : {3.0, 3.5, 4.0, 4.2, 5.0}) {
    const double lowest = oracle::min_eigenvalue(
        oracle::partial_transpose_a(catalog::horodecki_alpha_state(alpha).state.matrix(), 3, 3));
    out.detail << alpha << ": " << lowest << "; ";
    if (alpha <= 4.0)
      out.require(lowest >= -1e-10, "alpha " + std::to_string(alpha) + " not PPT");
    else
      out.require(lowest < -1e-6, "alpha " + std::to_string(alpha) + " PPT");
  }
}

void canonical_forms(Outcome& out) {
  Rng rng = restart_rng(808, 0);
  double worst_min = 0.0;
  int kernel_hits = 0;
  for (int i = 0; i < 20; ++i) {
    const int k = 2 + i % 2;
    const Matrix g = random_density_matrix(BipartiteDims(3, 3), 1 + i % 4, rng).matrix();
    const auto cfg = cfg_with(32, 900 + i);
    const auto w = witness::Witness::certify(witness::isotropic_matrix(3, k) + 0.3 * g, BipartiteDims(3, 3), k,
                                             witness::Provenance::User, cfg);
    const auto cf = witness::canonical_form(w, cfg);
    worst_min = std::max(worst_min, std::abs(oracle::min_eigenvalue(cf.w_tilde)));
    if (rankopt::find_rank_r_vector(cf.kernel_basis, BipartiteDims(3, 3), k - 1, cfg).found) ++kernel_hits;
  }
  out.detail << "max |min eigenvalue| " << worst_min << ", kernels with low-rank vectors " << kernel_hits;
  out.require(worst_min <= 1e-12, "min eigenvalue off zero");
  out.require(kernel_hits == 0, "kernel holds a low-rank vector");
}

void property_suite(Outcome& out) {
  Rng rng = restart_rng(909, 0);
  int involution_failures = 0;
  double lu_worst = 0.0, psd_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const BipartiteDims dims(2 + i % 2, 3);
    const Matrix x = random_density_matrix(dims, 1 + i % dims.total(), rng).matrix();
    const Side side = i % 2 == 0 ? Side::A : Side::B;
    if (!(partial_transpose(partial_transpose(x, dims, side), dims, side).array() == x.array()).all())
      ++involution_failures;

    const PureState psi = random_pure_state(dims, rng);
    const Vector rotated = kron(random_unitary(dims.m, rng), random_unitary(dims.n, rng)) * psi.amplitudes();
    lu_worst = std::max(lu_worst, (schmidt_coefficients(psi.amplitudes(), dims) - schmidt_coefficients(rotated, dims))
                                      .cwiseAbs()
                                      .maxCoeff());

    const auto rho = random_density_matrix(dims, 1 + i % dims.total(), rng);
    const auto sd = spectral(rho.matrix());
    const PureState phi = PureState::normalized(sd.range_basis * random_unit_vector(sd.rank, rng), dims);
    const auto sub = edge::subtract_pure(PositiveOperator(rho), phi);
    psd_worst = std::min(psd_worst, oracle::min_eigenvalue(sub.remainder.matrix()));
  }
  out.detail << "involution failures " << involution_failures << ", LU deviation " << lu_worst
             << ", lowest remainder eigenvalue " << psd_worst;
  out.require(involution_failures == 0, "involution not bit-exact");
  out.require(lu_worst <= 1e-10, "Schmidt coefficients moved");
  out.require(psd_worst >= -1e-9, "remainder not PSD");
}

std::string with_threads(const char* threads, const std::function<std::string()>& run) {
  setenv("QSW_THREADS", threads, 1);
  std::string s = run();
  unsetenv("QSW_THREADS");
  return s;
}

void determinism(Outcome& out) {
  const auto cfg = cfg_with(16, 11);
  const auto rho = catalog::upb_tiles_state().state;
  const auto classify = [&] { return report::to_json(report::classify(rho, cfg), rho, cfg).dump(); };
  const auto scan = [&] { return report::to_json(report::conjecture_scan(cfg), cfg).dump(); };
  const std::string c1 = with_threads("1", classify), c4 = with_threads("4", classify), c4b = with_threads("4", classify);
  const std::string s1 = with_threads("1", scan), s4 = with_threads("4", scan);
  out.detail << "classify " << c1.size() << " bytes, scan " << s1.size() << " bytes";
  out.require(c1 == c4 && c4 == c4b, "classify reports differ");
  out.require(s1 == s4, "scan reports differ");
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Outcome&)> criteria[] = {
      {"overlap law", overlap_law},
      {"isotropic witness contract", isotropic_contract},
      {"decomposability identity", decomposability_identity},
      {"rank-4 Schmidt-number-2 construction", rank4_reproduction},
      {"edge witness pipeline", edge_witness_pipeline},
      {"rank-2 violation evidence", rank2_evidence},
      {"alpha family PPT boundary", alpha_boundary},
      {"canonical form", canonical_forms},
      {"property suite", property_suite},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    if (!out.pass) ++failures;
    std::printf("%s %d %s: %s\n", out.pass ? "PASS" : "FAIL", index++, name, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
