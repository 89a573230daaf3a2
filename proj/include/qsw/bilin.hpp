#pragma once

// Bipartite linear algebra: states, Schmidt decomposition, partial transposition,
// spectral splitting into range and kernel.

#include <optional>
#include <vector>

#include "qsw/types.hpp"

namespace qsw {

/// Normalized pure state on C^m (x) C^n.
class PureState {
 public:
  /// Throws ValidationError unless the vector has length m*n and unit norm within 1e-12.
  PureState(Vector amplitudes, BipartiteDims dims);

  /// Rescales to unit norm; throws on a zero vector.
  static PureState normalized(const Vector& v, BipartiteDims dims);
  /// |a>|b>, normalized, with dims (a.size(), b.size()).
  static PureState product(const Vector& a, const Vector& b);
  /// (sum_i |ii>)/sqrt(m) on m x m.
  static PureState maximally_entangled(int m);
  /// Computational basis state |a>|b>.
  static PureState basis(BipartiteDims dims, int a, int b);

  const Vector& amplitudes() const { return amplitudes_; }
  const BipartiteDims& dims() const { return dims_; }

  /// m x n reshaping, entry (a, b) = <ab|psi>.
  Matrix amplitude_matrix() const;
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
  BipartiteDims dims_;
};

/// Trace-one positive semidefinite Hermitian operator.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10).
  DensityMatrix(Matrix entries, BipartiteDims dims);

  /// Hermitizes and normalizes the trace before validating.
  static DensityMatrix from_operator(const Matrix& op, BipartiteDims dims);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(BipartiteDims dims);

  const Matrix& matrix() const { return entries_; }
  const BipartiteDims& dims() const { return dims_; }

 private:
  Matrix entries_;
  BipartiteDims dims_;
};

/// Positive semidefinite operator whose trace is kept rather than normalized away.
/// Edge remainders live here so convex weights stay exact.
class PositiveOperator {
 public:
  /// Validates Hermiticity (1e-12) and min eigenvalue >= -1e-9.
  PositiveOperator(Matrix entries, BipartiteDims dims);
  explicit PositiveOperator(const DensityMatrix& rho) : entries_(rho.matrix()), dims_(rho.dims()) {}

  const Matrix& matrix() const { return entries_; }
  const BipartiteDims& dims() const { return dims_; }
  double trace() const { return entries_.trace().real(); }
  /// Divides by the trace; throws if the trace is not positive.
  DensityMatrix normalized() const;

 private:
  Matrix entries_;
  BipartiteDims dims_;
};

struct SchmidtDecomposition {
  RealVector coeffs;     // strictly positive, descending
  Matrix left_vectors;   // m x rank, orthonormal columns e_i
  Matrix right_vectors;  // n x rank, orthonormal columns f_i
  int rank = 0;

  /// sum_i a_i e_i (x) f_i
  Vector reconstruct() const;
};

struct SpectralData {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns match eigenvalues
  int rank = 0;
  Matrix range_basis;   // orthonormal columns, eigenvalues with |lambda| above the cut
  Matrix kernel_basis;  // orthonormal columns, the rest

  double min_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  double max_eigenvalue() const { return eigenvalues(0); }
  /// Projector onto range_basis.
  Matrix range_projector() const { return range_basis * range_basis.adjoint(); }
  Matrix kernel_projector() const { return kernel_basis * kernel_basis.adjoint(); }
  /// Moore-Penrose inverse restricted to the range.
  Matrix pseudo_inverse() const;
};

enum class Side { A, B };

/// Schmidt decomposition; coefficients <= tol * largest are dropped.
/// Left vectors have the phase of their first nonzero entry fixed real positive.
SchmidtDecomposition schmidt_decompose(const PureState& psi, double tol = kRankTol);

/// All singular values of the amplitude reshaping, descending (no validation, any norm).
RealVector schmidt_coefficients(const Vector& v, const BipartiteDims& dims);

/// Sum of the squared Schmidt coefficients beyond the r largest, relative to the squared norm.
double schmidt_tail(const Vector& v, const BipartiteDims& dims, int r);

/// Schmidt rank at relative cut tol.
int schmidt_rank(const Vector& v, const BipartiteDims& dims, double tol = kRankTol);

/// Transposes one tensor factor. Pure entry permutation, so it is an exact involution.
Matrix partial_transpose(const Matrix& op, const BipartiteDims& dims, Side side = Side::A);
Matrix partial_transpose(const DensityMatrix& rho, Side side = Side::A);

struct PptResult {
  bool ppt = false;
  double min_eigenvalue = 0.0;
};

/// PPT iff the smallest eigenvalue of rho^{T_A} is >= -tol.
PptResult is_ppt(const DensityMatrix& rho, double tol = 1e-10);

/// Eigendecomposition of a Hermitian operator with a relative rank cut tol * max|lambda|.
/// Throws ValidationError if op deviates from Hermitian by more than 1e-10.
SpectralData spectral(const Matrix& op, double tol = kRankTol);

Vector kron(const Vector& a, const Vector& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Largest entrywise modulus.
double max_abs(const Matrix& x);
Matrix hermitian_part(const Matrix& x);

/// Rebuilds the operator on the exchanged tensor order (B (x) A).
Matrix swap_subsystems(const Matrix& op, int dim_a, int dim_b);
Vector swap_subsystems(const Vector& v, int dim_a, int dim_b);

/// Operator on m x m exchanging the two factors.
Matrix swap_operator(int m);
/// Projector onto the antisymmetric subspace of C^m (x) C^m.
Matrix antisymmetric_projector(int m);

}  // namespace qsw
