#include "qsw/report.hpp"

#include <algorithm>

namespace qsw::report {

namespace {

constexpr int kEigenvectorCandidates = 3;

json witness_block(const Matrix& w, const BipartiteDims& dims, int k, const std::string& method, double value) {
  return {{"method", method}, {"k", k}, {"value", value}, {"witness", io::to_json(w, dims)}};
}

double trace_with(const Matrix& w, const DensityMatrix& rho) { return witness::evaluate(w, rho).value; }

/// Stage 1: a negative eigenvector v of rho^T_A gives the witness |v><v|^T_A.
void pt_stage(const DensityMatrix& rho, int k_max, double tol, SchmidtNumberBounds& b) {
  const SpectralData pt = spectral(hermitian_part(partial_transpose(rho)));
  const double lowest = pt.min_eigenvalue();
  b.attempts.push_back({{"method", "partial_transpose"}, {"min_eigenvalue", lowest}, {"ppt", lowest >= -1e-10}});
  if (k_max < 2 || lowest >= -tol) return;
  const Vector v = pt.eigenvectors.col(pt.eigenvectors.cols() - 1);
  const Matrix w = partial_transpose(Matrix(v * v.adjoint()), rho.dims(), Side::A);
  b.lower = 2;
  b.lower_certificate = witness_block(w, rho.dims(), 2, "nppt", trace_with(w, rho));
}

/// Stage 2: s_{k-1}(phi) 1 - |phi><phi| is non-negative on Schmidt rank <= k-1, where
/// s_{k-1} is the sum of the k-1 largest squared Schmidt coefficients of phi.
void fidelity_stage(const DensityMatrix& rho, int k_max, double tol, SchmidtNumberBounds& b) {
  const BipartiteDims& dims = rho.dims();
  std::vector<std::pair<std::string, Vector>> probes;
  if (dims.m == dims.n) probes.emplace_back("isotropic", PureState::maximally_entangled(dims.m).amplitudes());
  const SpectralData sd = spectral(rho.matrix());
  for (int i = 0; i < std::min(sd.rank, kEigenvectorCandidates); ++i)
    probes.emplace_back("fidelity", sd.eigenvectors.col(i));
  for (const auto& [method, phi] : probes) {
    const RealVector coeffs = schmidt_coefficients(phi, dims);
    const RealVector sq = coeffs.array().square() / coeffs.squaredNorm();
    const double fidelity = phi.dot(rho.matrix() * phi).real();
    double partial = 0.0;
    for (int k = 2; k <= k_max; ++k) {
      partial += sq(k - 2);
      const double value = partial - fidelity;
      if (k <= b.lower || value >= -tol) continue;
      b.lower = k;
      b.lower_certificate = {{"method", method},
                             {"k", k},
                             {"value", value},
                             {"overlap_bound", partial},
                             {"fidelity", fidelity},
                             {"probe", io::to_json(phi, dims)}};
      if (method == "isotropic")
        b.lower_certificate["isotropic_value"] = trace_with(witness::isotropic_matrix(dims.m, k), rho);
    }
    b.attempts.push_back({{"method", method}, {"fidelity", fidelity}, {"lower_after", b.lower}});
  }
}

/// Stage 3: closed-form catalog witnesses on 3 x 3, each certified before it counts.
void catalog_stage(const DensityMatrix& rho, int k_max, const OptimizerConfig& cfg, double tol,
                   SchmidtNumberBounds& b) {
  if (k_max < 2 || b.lower >= 2 || rho.dims().m != 3 || rho.dims().n != 3) return;
  for (const auto& named : catalog::witnesses()) {
    const double value = trace_with(named.matrix, rho);
    json attempt = {{"method", "catalog"}, {"witness", named.name}, {"value", value}};
    if (value < -tol) {
      try {
        witness::Witness::certify(named.matrix, rho.dims(), 2, witness::Provenance::User, cfg);
        b.lower = 2;
        b.lower_certificate = witness_block(named.matrix, rho.dims(), 2, "catalog", value);
        b.lower_certificate["name"] = named.name;
      } catch (const CertificationError& e) {
        attempt["error"] = e.what();
      }
    }
    b.attempts.push_back(attempt);
    if (b.lower >= 2) return;
  }
}

void upper_stage(const DensityMatrix& rho, const OptimizerConfig& cfg, SchmidtNumberBounds& b) {
  const BipartiteDims& dims = rho.dims();
  const SpectralData sd = spectral(rho.matrix());
  if (sd.rank == 1) {
    const int sr = schmidt_rank(sd.eigenvectors.col(0), dims);
    b.upper = sr;
    b.upper_certificate = {{"method", "pure_state"}, {"schmidt_rank", sr}};
    return;
  }
  if (dims.m == 3 && dims.n == 3 && sd.rank == 4 && is_ppt(rho, 1e-9).ppt) {
    try {
      const auto cert = edge::rank4_schmidt2(rho, cfg);
      b.upper = 2;
      b.upper_certificate = {{"method", "rank4_construction"}, {"certificate", io::to_json(cert)}};
      b.attempts.push_back({{"method", "rank4_construction"}, {"ok", true}});
      return;
    } catch (const Error& e) {
      b.attempts.push_back({{"method", "rank4_construction"}, {"ok", false}, {"error", e.what()}});
    }
  }
  // the identity part splits into computational product states
  const double shift = std::max(0.0, sd.min_eigenvalue());
  const int dim = dims.total();
  const Matrix rest = hermitian_part(rho.matrix() - shift * Matrix::Identity(dim, dim));
  for (int k = std::max(2, b.lower + 1); k <= dims.m; ++k) {
    try {
      const auto dec = edge::edge_decompose(PositiveOperator(rest, dims), k, cfg);
      b.attempts.push_back({{"method", "greedy_decomposition"},
                            {"k", k},
                            {"steps", dec.steps},
                            {"remainder_trace", dec.p},
                            {"fully_decomposed", dec.fully_decomposed}});
      if (!dec.fully_decomposed) continue;
      int max_rank = 0;
      for (const auto& c : dec.components) max_rank = std::max(max_rank, c.schmidt_rank);
      if (shift > 0.0) max_rank = std::max(max_rank, 1);
      b.upper = max_rank;
      b.upper_certificate = {{"method", "greedy_decomposition"},
                             {"k", k},
                             {"identity_weight", shift},
                             {"max_component_rank", max_rank},
                             {"decomposition", io::to_json(dec)}};
      return;
    } catch (const Error& e) {
      b.warnings.push_back("decomposition with k = " + std::to_string(k) + " failed: " + e.what());
    }
  }
}

struct EdgeWitnessRun {
  Matrix w;
  std::string method;
};

/// Kernel-projector witness when the range holds no product vector, otherwise P + Q^T_A - eps 1.
EdgeWitnessRun edge_witness_k2(const PositiveOperator& delta, const OptimizerConfig& cfg) {
  try {
    return {witness::witness_from_edge(delta, 2, cfg).witness.matrix(), "edge_kernel"};
  } catch (const CertificationError&) {
    return {witness::witness_from_ppt_edge(delta, cfg).witness.matrix(), "ppt_edge"};
  }
}

void edge_stage(const DensityMatrix& rho, const OptimizerConfig& cfg, double tol, SchmidtNumberBounds& b) {
  const bool ppt = is_ppt(rho, 1e-9).ppt;
  for (int k = b.lower + 1; k <= b.upper; ++k) {
    json attempt = {{"method", "edge_witness"}, {"k", k}};
    try {
      EdgeWitnessRun run;
      if (k == 2 && ppt) {
        const auto dec = edge::edge_decompose(rho, 2, cfg, edge::DecomposeOptions{true, 256});
        if (dec.fully_decomposed) throw ValidationError("state splits fully into PPT-compatible products");
        run = edge_witness_k2(dec.delta, cfg);
        attempt["edge_weight"] = dec.p;
      } else {
        const auto dec = edge::edge_decompose(rho, k, cfg);
        if (dec.fully_decomposed) throw ValidationError("no edge remainder");
        run = {witness::witness_from_edge(dec.delta, k, cfg).witness.matrix(), "edge_kernel"};
        attempt["edge_weight"] = dec.p;
      }
      const double value = trace_with(run.w, rho);
      attempt["value"] = value;
      attempt["witness_method"] = run.method;
      b.attempts.push_back(attempt);
      if (value >= -tol) break;
      b.lower = k;
      b.lower_certificate = witness_block(run.w, rho.dims(), k, run.method, value);
    } catch (const Error& e) {
      attempt["error"] = e.what();
      b.attempts.push_back(attempt);
      break;
    }
  }
}

}  // namespace

SchmidtNumberBounds classify(const DensityMatrix& rho, const OptimizerConfig& cfg, const ClassifyOptions& opts) {
  cfg.validate();
  const int m = rho.dims().m;
  if (opts.k_max < 0) throw ValidationError("k_max must be positive");
  const int k_max = opts.k_max == 0 ? m : std::min(opts.k_max, m);
  SchmidtNumberBounds b;
  b.upper = m;
  b.lower_certificate = {{"method", "trivial"}};
  b.upper_certificate = {{"method", "dimension"}};
  pt_stage(rho, k_max, opts.detect_tol, b);
  fidelity_stage(rho, k_max, opts.detect_tol, b);
  catalog_stage(rho, k_max, cfg, opts.detect_tol, b);
  upper_stage(rho, cfg, b);
  if (b.lower < std::min(b.upper, k_max)) {
    const int saved_upper = b.upper;
    b.upper = std::min(b.upper, k_max);
    edge_stage(rho, cfg, opts.detect_tol, b);
    b.upper = saved_upper;
  }
  if (b.lower > b.upper) {
    b.warnings.push_back("lower bound " + std::to_string(b.lower) + " exceeds upper bound " +
                         std::to_string(b.upper) + "; upper bound widened to m");
    b.upper = m;
    b.upper_certificate = {{"method", "dimension"}};
  }
  return b;
}

json to_json(const SchmidtNumberBounds& b, const DensityMatrix& rho, const OptimizerConfig& cfg) {
  const SpectralData sd = spectral(rho.matrix());
  const PptResult ppt = is_ppt(rho);
  return {{"command", "classify"},
          {"dims", {rho.dims().m, rho.dims().n}},
          {"config", io::to_json(cfg)},
          {"state", {{"rank", sd.rank}, {"ppt", ppt.ppt}, {"pt_min_eigenvalue", ppt.min_eigenvalue}}},
          {"bounds", {{"lower", b.lower}, {"upper", b.upper}}},
          {"lower_certificate", b.lower_certificate},
          {"upper_certificate", b.upper_certificate},
          {"attempts", b.attempts},
          {"warnings", b.warnings}};
}

std::vector<ScanRow> conjecture_scan(const OptimizerConfig& cfg) {
  cfg.validate();
  std::vector<ScanRow> rows;
  for (const auto& family : catalog::families()) {
    if (!family.ppt_entangled) continue;
    const auto entry = catalog::make(family.name);
    ScanRow row;
    row.family = family.name;
    row.parameters = json::object();
    for (const auto& p : entry.parameters) row.parameters[p.name] = p.value;
    row.state_rank = spectral(entry.state.matrix()).rank;
    row.state_pt_rank = spectral(partial_transpose(entry.state)).rank;
    try {
      const DensityMatrix delta = edge::ppt_edge_state(entry.state, cfg);
      row.edge_extracted = true;
      row.edge_rank = spectral(delta.matrix()).rank;
      row.edge_pt_rank = spectral(partial_transpose(delta)).rank;
      const auto search = edge::rank2_violation_search(delta, cfg);
      row.l_count = search.l_count;
      row.admissible = search.admissible;
      row.psi2_found = search.found.has_value();
      row.psi2_value = search.found ? search.found->value : search.best_value;
      row.rank4_applies = row.edge_rank == 4;
      if (row.rank4_applies) {
        try {
          const auto cert = edge::rank4_schmidt2(delta, cfg);
          row.schmidt2_certificate = cert.reconstruction_error <= 1e-8;
        } catch (const Error& e) {
          row.errors.push_back(std::string("rank4_schmidt2: ") + e.what());
        }
      }
      try {
        const auto run = edge_witness_k2(PositiveOperator(delta), cfg);
        row.witness_value = trace_with(run.w, delta);
        row.witness_detects = row.witness_value < -1e-9;
      } catch (const Error& e) {
        row.errors.push_back(std::string("edge witness: ") + e.what());
      }
    } catch (const Error& e) {
      row.errors.push_back(std::string("edge extraction: ") + e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const std::vector<ScanRow>& rows, const OptimizerConfig& cfg) {
  json table = json::array();
  for (const auto& r : rows)
    table.push_back({{"family", r.family},
                     {"parameters", r.parameters},
                     {"state_ranks", {r.state_rank, r.state_pt_rank}},
                     {"edge_extracted", r.edge_extracted},
                     {"edge_ranks", {r.edge_rank, r.edge_pt_rank}},
                     {"l_count", r.l_count},
                     {"admissible", r.admissible},
                     {"psi2_found", r.psi2_found},
                     {"psi2_value", r.psi2_value},
                     {"rank4_applies", r.rank4_applies},
                     {"schmidt2_certificate", r.schmidt2_certificate},
                     {"witness_detects", r.witness_detects},
                     {"witness_value", r.witness_value},
                     {"errors", r.errors}});
  return {{"command", "conjecture scan"}, {"config", io::to_json(cfg)}, {"rows", table}};
}

}  // namespace qsw::report
