#pragma once

// Schmidt-number witnesses: construction, canonical form, evaluation and
// decomposability certificates.

#include <string>

#include "qsw/bilin.hpp"
#include "qsw/rankopt.hpp"

namespace qsw::witness {

using rankopt::OptimizerConfig;

enum class Provenance { Isotropic, FromEdge, Canonical, Optimized, User };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Record of the optimizer run that backs a witness. The minimum is over unit
/// vectors of Schmidt rank <= k-1 and is certified up to optimizer confidence.
struct Certification {
  double min_value = 0.0;
  int restarts = 0;
  std::uint64_t seed = 0;
  double tolerance = kCertificationTol;
  double gap = 0.0;
};

/// Hermitian operator W with <psi|W|psi> >= 0 on Schmidt rank < k and at least one
/// negative eigenvalue. Matrices are kept unnormalized.
class Witness {
 public:
  /// Runs the rank-(k-1) minimization and throws CertificationError if it dips below -tol.
  static Witness certify(const Matrix& matrix, const BipartiteDims& dims, int k, Provenance provenance,
                         const OptimizerConfig& cfg, double tol = kCertificationTol);
  /// Wraps a matrix whose certification happened elsewhere (e.g. a witness file).
  /// Hermiticity, the negative eigenvalue and the range of k are still checked.
  static Witness trusted(const Matrix& matrix, const BipartiteDims& dims, int k, Provenance provenance,
                         Certification cert);

  const Matrix& matrix() const { return matrix_; }
  const BipartiteDims& dims() const { return dims_; }
  int k() const { return k_; }
  Provenance provenance() const { return provenance_; }
  const Certification& certification() const { return cert_; }

 private:
  Witness(Matrix matrix, BipartiteDims dims, int k, Provenance provenance, Certification cert);

  Matrix matrix_;
  BipartiteDims dims_;
  int k_;
  Provenance provenance_;
  Certification cert_;
};

struct Evaluation {
  double value = 0.0;
  /// |Im Tr(W rho)|; below 1e-10 for Hermitian inputs.
  double imag_residue = 0.0;
};

/// Tr(W rho). Throws ValidationError on a dimension mismatch.
Evaluation evaluate(const Witness& w, const DensityMatrix& rho);
Evaluation evaluate(const Matrix& w, const DensityMatrix& rho);

/// 1 - (m/(k-1)) |Psi_+><Psi_+| on m x m.
Witness isotropic_witness(int m, int k, const OptimizerConfig& cfg = {});
/// Matrix of isotropic_witness without the certification run.
Matrix isotropic_matrix(int m, int k);

/// W = p_part + q_part^{T_A} with both parts positive semidefinite.
struct DecomposabilityCertificate {
  Matrix p_part;
  Matrix q_part;
  double residual = 0.0;
};

/// Closed-form split of the isotropic witness:
/// (1 - 1/(k-1)) 1 + (2/(k-1)) P_a^{T_A}, residual measured against isotropic_matrix(m, k).
DecomposabilityCertificate antisymmetric_decomposition(int m, int k);

/// max |W - (p + q^{T_A})| for an arbitrary candidate split.
double decomposition_residual(const Matrix& w, const BipartiteDims& dims, const Matrix& p_part, const Matrix& q_part);

struct CanonicalForm {
  Matrix w_tilde;       // W + epsilon 1, PSD with nonempty kernel
  double epsilon = 0.0;  // |most negative eigenvalue of W|
  Matrix kernel_basis;
  /// Min of <psi|w_tilde|psi> over Schmidt rank <= k-1; must be >= epsilon - tol.
  double certified_min = 0.0;
  bool certified = false;
};

/// W = w_tilde - epsilon 1. Throws ValidationError if W has no negative eigenvalue.
CanonicalForm canonical_form(const Witness& w, const OptimizerConfig& cfg = {}, double tol = kCertificationTol);

/// Witness P - (eps/c) C detecting a k-edge state, with P the kernel projector of delta.
///
/// eps is the minimum of <psi|P|psi> over Schmidt rank <= k-1 and c = lambda_max(C).
/// Throws CertificationError carrying the violating vector's value when eps <= tol,
/// i.e. the range of delta holds a vector of rank < k.
struct EdgeWitness {
  Witness witness;
  double epsilon = 0.0;
  double c = 0.0;
  rankopt::RankOptResult epsilon_search;
};
EdgeWitness witness_from_edge(const PositiveOperator& delta, int k, const OptimizerConfig& cfg = {});
EdgeWitness witness_from_edge(const PositiveOperator& delta, int k, const Matrix& c_operator,
                              const OptimizerConfig& cfg = {});

/// Entanglement witness P + Q^{T_A} - eps 1 for a PPT state, with P on the kernel of
/// delta and Q on the kernel of delta^{T_A}; eps is the minimum over product vectors.
/// Detects delta whenever no e (x) f in R(delta) has conj(e) (x) f in R(delta^{T_A}).
EdgeWitness witness_from_ppt_edge(const PositiveOperator& delta, const OptimizerConfig& cfg = {});

struct DecomposabilityCheck {
  bool decomposable = false;  // lambda_max / lambda_min <= 1 + a_2^2 / a_3^2
  double ratio = 0.0;         // lambda_max / lambda_min on the range of Q
  double bound = 0.0;         // 1 + a_2^2 / a_3^2
  bool spectral_condition = false;  // lambda_min (1 - a_1^2) >= epsilon
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  RealVector kernel_coeffs;  // a_1 >= a_2 >= a_3 of the kernel vector
};

/// Sufficient decomposability tests for W = Q - eps 1 on 3 x 3 with rank(Q) = 8.
/// Throws ValidationError for other shapes or a kernel vector of Schmidt rank < 3.
DecomposabilityCheck decomposability_check(const Matrix& q, double epsilon);

}  // namespace qsw::witness
