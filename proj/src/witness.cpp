#include "qsw/witness.hpp"

#include <algorithm>
#include <cmath>

namespace qsw::witness {

using rankopt::Extremum;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Isotropic: return "isotropic";
    case Provenance::FromEdge: return "from_edge";
    case Provenance::Canonical: return "canonical";
    case Provenance::Optimized: return "optimized";
    case Provenance::User: return "user";
  }
  return "user";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "isotropic") return Provenance::Isotropic;
  if (s == "from_edge") return Provenance::FromEdge;
  if (s == "canonical") return Provenance::Canonical;
  if (s == "optimized") return Provenance::Optimized;
  if (s == "user") return Provenance::User;
  throw ValidationError("unknown witness provenance '" + s + "'");
}

namespace {

void check_shape(const Matrix& w, const BipartiteDims& dims, int k) {
  if (w.rows() != dims.total() || w.cols() != dims.total()) throw ValidationError("witness shape does not match dims");
  if (k < 2 || k > dims.m) throw ValidationError("witness class k must satisfy 2 <= k <= m");
  if (max_abs(w - w.adjoint()) > 1e-12) throw ValidationError("witness matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) < 0.0)) throw ValidationError("witness has no negative eigenvalue");
}

}  // namespace

Witness::Witness(Matrix matrix, BipartiteDims dims, int k, Provenance provenance, Certification cert)
    : matrix_(std::move(matrix)), dims_(dims), k_(k), provenance_(provenance), cert_(cert) {}

Witness Witness::certify(const Matrix& matrix, const BipartiteDims& dims, int k, Provenance provenance,
                         const OptimizerConfig& cfg, double tol) {
  check_shape(matrix, dims, k);
  const auto res = rankopt::extremal_overlap(matrix, dims, k - 1, Extremum::Min, cfg);
  if (res.value < -tol)
    throw CertificationError("operator is negative on a Schmidt-rank " + std::to_string(k - 1) + " state", res.value);
  return Witness(matrix, dims, k, provenance, Certification{res.value, cfg.restarts, cfg.seed, tol, res.gap});
}

Witness Witness::trusted(const Matrix& matrix, const BipartiteDims& dims, int k, Provenance provenance,
                         Certification cert) {
  check_shape(matrix, dims, k);
  return Witness(matrix, dims, k, provenance, cert);
}

Evaluation evaluate(const Matrix& w, const DensityMatrix& rho) {
  if (w.rows() != rho.matrix().rows() || w.cols() != rho.matrix().cols())
    throw ValidationError("witness and state dimensions differ");
  const cplx t = (w * rho.matrix()).trace();
  return {t.real(), std::abs(t.imag())};
}

Evaluation evaluate(const Witness& w, const DensityMatrix& rho) {
  if (!(w.dims() == rho.dims())) throw ValidationError("witness and state dimensions differ");
  return evaluate(w.matrix(), rho);
}

Matrix isotropic_matrix(int m, int k) {
  if (m < 2) throw ValidationError("isotropic witness needs m >= 2");
  if (k < 2 || k > m) throw ValidationError("isotropic witness needs 2 <= k <= m");
  const Matrix proj = PureState::maximally_entangled(m).projector();
  return Matrix::Identity(m * m, m * m) - (static_cast<double>(m) / (k - 1)) * proj;
}

Witness isotropic_witness(int m, int k, const OptimizerConfig& cfg) {
  return Witness::certify(isotropic_matrix(m, k), BipartiteDims(m, m), k, Provenance::Isotropic, cfg);
}

double decomposition_residual(const Matrix& w, const BipartiteDims& dims, const Matrix& p_part, const Matrix& q_part) {
  return max_abs(w - (p_part + partial_transpose(q_part, dims, Side::A)));
}

DecomposabilityCertificate antisymmetric_decomposition(int m, int k) {
  const Matrix w = isotropic_matrix(m, k);
  const double inv = 1.0 / (k - 1);
  DecomposabilityCertificate cert;
  cert.p_part = (1.0 - inv) * Matrix::Identity(m * m, m * m);
  cert.q_part = (2.0 * inv) * antisymmetric_projector(m);
  cert.residual = decomposition_residual(w, BipartiteDims(m, m), cert.p_part, cert.q_part);
  return cert;
}

CanonicalForm canonical_form(const Witness& w, const OptimizerConfig& cfg, double tol) {
  const SpectralData sd = spectral(w.matrix());
  const double lowest = sd.min_eigenvalue();
  if (!(lowest < 0.0)) throw ValidationError("canonical_form: operator has no negative eigenvalue");
  CanonicalForm out;
  out.epsilon = -lowest;
  const auto dim = w.matrix().rows();
  out.w_tilde = w.matrix() + out.epsilon * Matrix::Identity(dim, dim);
  out.kernel_basis = spectral(out.w_tilde).kernel_basis;
  const auto res = rankopt::extremal_overlap(out.w_tilde, w.dims(), w.k() - 1, Extremum::Min, cfg);
  out.certified_min = res.value;
  out.certified = res.value >= out.epsilon - tol;
  return out;
}

namespace {

Matrix kernel_projector(const PositiveOperator& delta) {
  const SpectralData sd = spectral(delta.matrix());
  return sd.kernel_projector();
}

}  // namespace

EdgeWitness witness_from_edge(const PositiveOperator& delta, int k, const Matrix& c_operator,
                              const OptimizerConfig& cfg) {
  const BipartiteDims& dims = delta.dims();
  if (k < 2 || k > dims.m) throw ValidationError("witness_from_edge: need 2 <= k <= m");
  if (c_operator.rows() != dims.total() || c_operator.cols() != dims.total())
    throw ValidationError("witness_from_edge: C has the wrong shape");
  const SpectralData c_spec = spectral(c_operator);
  if (c_spec.min_eigenvalue() < -1e-10) throw ValidationError("witness_from_edge: C must be positive");
  if (!((delta.matrix() * c_operator).trace().real() > 0.0))
    throw ValidationError("witness_from_edge: Tr(delta C) must be positive");

  const Matrix p = kernel_projector(delta);
  auto search = rankopt::extremal_overlap(p, dims, k - 1, Extremum::Min, cfg);
  if (search.value <= kRankTol)
    throw RankViolationError("range of delta contains a vector of Schmidt rank < k; not a k-edge state", search.value,
                             search.argvector.amplitudes());
  const double eps = search.value;
  const double c = c_spec.max_eigenvalue();
  const Matrix w = hermitian_part(p - (eps / c) * c_operator);
  Witness wit = Witness::certify(w, dims, k, Provenance::FromEdge, cfg);
  return EdgeWitness{std::move(wit), eps, c, std::move(search)};
}

EdgeWitness witness_from_edge(const PositiveOperator& delta, int k, const OptimizerConfig& cfg) {
  return witness_from_edge(delta, k, Matrix::Identity(delta.dims().total(), delta.dims().total()), cfg);
}

EdgeWitness witness_from_ppt_edge(const PositiveOperator& delta, const OptimizerConfig& cfg) {
  const BipartiteDims& dims = delta.dims();
  const Matrix p = kernel_projector(delta);
  const Matrix pt = hermitian_part(partial_transpose(delta.matrix(), dims, Side::A));
  const SpectralData pt_spec = spectral(pt);
  if (pt_spec.min_eigenvalue() < -1e-9 * std::max(1.0, pt_spec.max_eigenvalue()))
    throw ValidationError("witness_from_ppt_edge: state is not PPT");
  const Matrix q = pt_spec.kernel_projector();
  const Matrix a = hermitian_part(p + partial_transpose(q, dims, Side::A));
  auto search = rankopt::extremal_overlap(a, dims, 1, Extremum::Min, cfg);
  if (search.value <= kRankTol)
    throw RankViolationError("a product vector is compatible with both ranges; not a PPT edge state", search.value,
                             search.argvector.amplitudes());
  const double eps = search.value;
  const Matrix w = a - eps * Matrix::Identity(dims.total(), dims.total());
  Witness wit = Witness::certify(w, dims, 2, Provenance::FromEdge, cfg);
  return EdgeWitness{std::move(wit), eps, 1.0, std::move(search)};
}

DecomposabilityCheck decomposability_check(const Matrix& q, double epsilon) {
  if (q.rows() != 9 || q.cols() != 9) throw ValidationError("decomposability_check applies to 3 x 3 systems only");
  const SpectralData sd = spectral(q);
  if (sd.min_eigenvalue() < -1e-10 * std::max(1.0, sd.max_eigenvalue()))
    throw ValidationError("decomposability_check: Q must be positive semidefinite");
  if (sd.rank != 8) throw ValidationError("decomposability_check: Q must have rank 8");
  const BipartiteDims dims(3, 3);
  const Vector kernel_vec = sd.kernel_basis.col(0);
  const RealVector a = schmidt_coefficients(kernel_vec, dims);
  if (!(a(2) > kRankTol * a(0)))
    throw ValidationError("decomposability_check: kernel vector has Schmidt rank < 3, no class-3 witness of this form");

  DecomposabilityCheck out;
  out.kernel_coeffs = a;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double v = sd.eigenvalues(i);
    if (std::abs(v) > kRankTol * sd.max_eigenvalue()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  out.lambda_min = lo;
  out.lambda_max = hi;
  out.ratio = hi / lo;
  out.bound = 1.0 + (a(1) * a(1)) / (a(2) * a(2));
  out.decomposable = out.ratio <= out.bound;
  out.spectral_condition = lo * (1.0 - a(0) * a(0)) >= epsilon;
  return out;
}

}  // namespace qsw::witness
