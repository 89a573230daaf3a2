#include "qsw/bilin.hpp"

#include <algorithm>
#include <cmath>

namespace qsw {

namespace {

void check_length(const Vector& v, const BipartiteDims& dims) {
  if (v.size() != dims.total()) throw ValidationError("state length does not match m*n");
}

void check_square(const Matrix& x, const BipartiteDims& dims) {
  if (x.rows() != dims.total() || x.cols() != dims.total())
    throw ValidationError("operator shape does not match m*n");
}

double hermiticity_defect(const Matrix& x) { return max_abs(x - x.adjoint()); }

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(Vector amplitudes, BipartiteDims dims) : amplitudes_(std::move(amplitudes)), dims_(dims) {
  check_length(amplitudes_, dims_);
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) throw ValidationError("pure state is not normalized");
}

PureState PureState::normalized(const Vector& v, BipartiteDims dims) {
  check_length(v, dims);
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw ValidationError("cannot normalize a zero vector");
  return PureState(v / nrm, dims);
}

PureState PureState::product(const Vector& a, const Vector& b) {
  return normalized(kron(a, b), BipartiteDims(static_cast<int>(a.size()), static_cast<int>(b.size())));
}

PureState PureState::maximally_entangled(int m) {
  BipartiteDims dims(m, m);
  Vector v = Vector::Zero(dims.total());
  for (int i = 0; i < m; ++i) v(i * m + i) = 1.0;
  return normalized(v, dims);
}

PureState PureState::basis(BipartiteDims dims, int a, int b) {
  if (a < 0 || a >= dims.m || b < 0 || b >= dims.n) throw ValidationError("basis index out of range");
  Vector v = Vector::Zero(dims.total());
  v(a * dims.n + b) = 1.0;
  return PureState(v, dims);
}

Matrix PureState::amplitude_matrix() const {
  Matrix out(dims_.m, dims_.n);
  for (int a = 0; a < dims_.m; ++a)
    for (int b = 0; b < dims_.n; ++b) out(a, b) = amplitudes_(a * dims_.n + b);
  return out;
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries, BipartiteDims dims) : entries_(std::move(entries)), dims_(dims) {
  check_square(entries_, dims_);
  if (hermiticity_defect(entries_) > 1e-12) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(entries_.trace().real() - 1.0) > 1e-10) throw ValidationError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10) throw ValidationError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_operator(const Matrix& op, BipartiteDims dims) {
  check_square(op, dims);
  Matrix h = hermitian_part(op);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw ValidationError("operator trace must be positive");
  return DensityMatrix(h / tr, dims);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return from_operator(psi.projector(), psi.dims());
}

DensityMatrix DensityMatrix::maximally_mixed(BipartiteDims dims) {
  return DensityMatrix(Matrix::Identity(dims.total(), dims.total()) / static_cast<double>(dims.total()), dims);
}

// --------------------------------------------------------- PositiveOperator

PositiveOperator::PositiveOperator(Matrix entries, BipartiteDims dims) : entries_(std::move(entries)), dims_(dims) {
  check_square(entries_, dims_);
  if (hermiticity_defect(entries_) > 1e-12) throw ValidationError("positive operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-9) throw ValidationError("operator is not positive semidefinite");
}

DensityMatrix PositiveOperator::normalized() const { return DensityMatrix::from_operator(entries_, dims_); }

// ---------------------------------------------------------------- Schmidt

Vector SchmidtDecomposition::reconstruct() const {
  const auto m = left_vectors.rows();
  const auto n = right_vectors.rows();
  Vector out = Vector::Zero(m * n);
  for (int i = 0; i < rank; ++i) out += coeffs(i) * kron(Vector(left_vectors.col(i)), Vector(right_vectors.col(i)));
  return out;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ValidationError("Schmidt tolerance must lie in (0, 1)");
  const Matrix amp = psi.amplitude_matrix();
  Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > tol * s(0)) ++rank;

  SchmidtDecomposition out;
  out.rank = rank;
  out.coeffs = s.head(rank);
  out.left_vectors = svd.matrixU().leftCols(rank);
  // amp = U S V^dagger  =>  psi = sum_i s_i u_i (x) conj(v_i)
  out.right_vectors = svd.matrixV().leftCols(rank).conjugate();
  for (int i = 0; i < rank; ++i) {
    auto e = out.left_vectors.col(i);
    int lead = 0;
    while (lead < e.size() && std::abs(e(lead)) <= 1e-14) ++lead;
    if (lead == e.size()) continue;
    const cplx phase = e(lead) / std::abs(e(lead));
    e /= phase;
    out.right_vectors.col(i) *= phase;
  }
  return out;
}

RealVector schmidt_coefficients(const Vector& v, const BipartiteDims& dims) {
  check_length(v, dims);
  Matrix amp(dims.m, dims.n);
  for (int a = 0; a < dims.m; ++a)
    for (int b = 0; b < dims.n; ++b) amp(a, b) = v(a * dims.n + b);
  return Eigen::JacobiSVD<Matrix>(amp).singularValues();
}

double schmidt_tail(const Vector& v, const BipartiteDims& dims, int r) {
  const RealVector s = schmidt_coefficients(v, dims);
  const double total = s.squaredNorm();
  if (total == 0.0) return 0.0;
  double tail = 0.0;
  for (int i = std::max(r, 0); i < s.size(); ++i) tail += s(i) * s(i);
  return tail / total;
}

int schmidt_rank(const Vector& v, const BipartiteDims& dims, double tol) {
  const RealVector s = schmidt_coefficients(v, dims);
  int rank = 0;
  while (rank < s.size() && s(rank) > tol * s(0)) ++rank;
  return rank;
}

// ------------------------------------------------------- partial transpose

Matrix partial_transpose(const Matrix& op, const BipartiteDims& dims, Side side) {
  check_square(op, dims);
  const int m = dims.m;
  const int n = dims.n;
  Matrix out(op.rows(), op.cols());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b)
      for (int a2 = 0; a2 < m; ++a2)
        for (int b2 = 0; b2 < n; ++b2) {
          const int row = a * n + b;
          const int col = a2 * n + b2;
          if (side == Side::A)
            out(row, col) = op(a2 * n + b, a * n + b2);
          else
            out(row, col) = op(a * n + b2, a2 * n + b);
        }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, Side side) { return partial_transpose(rho.matrix(), rho.dims(), side); }

PptResult is_ppt(const DensityMatrix& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho), Eigen::EigenvaluesOnly);
  PptResult r;
  r.min_eigenvalue = es.eigenvalues()(0);
  r.ppt = r.min_eigenvalue >= -tol;
  return r;
}

// ---------------------------------------------------------------- spectral

SpectralData spectral(const Matrix& op, double tol) {
  if (op.rows() != op.cols()) throw ValidationError("spectral: operator must be square");
  if (hermiticity_defect(op) > 1e-10) throw ValidationError("spectral: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(op));
  const auto dim = op.rows();
  SpectralData out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
  std::vector<int> range, kernel;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (scale > 0.0 && std::abs(out.eigenvalues(i)) > tol * scale)
      range.push_back(static_cast<int>(i));
    else
      kernel.push_back(static_cast<int>(i));
  }
  out.rank = static_cast<int>(range.size());
  out.range_basis.resize(dim, out.rank);
  out.kernel_basis.resize(dim, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t j = 0; j < range.size(); ++j) out.range_basis.col(j) = out.eigenvectors.col(range[j]);
  for (std::size_t j = 0; j < kernel.size(); ++j) out.kernel_basis.col(j) = out.eigenvectors.col(kernel[j]);
  return out;
}

Matrix SpectralData::pseudo_inverse() const {
  const auto dim = eigenvectors.rows();
  Matrix out = Matrix::Zero(dim, dim);
  const double scale = eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (scale > 0.0 && std::abs(eigenvalues(i)) > 0.0 && std::abs(eigenvalues(i)) > kRankTol * scale) {
      const Vector v = eigenvectors.col(i);
      out += (v * v.adjoint()) / eigenvalues(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------- helpers

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const Matrix& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

Matrix hermitian_part(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

Matrix swap_subsystems(const Matrix& op, int dim_a, int dim_b) {
  const int d = dim_a * dim_b;
  if (op.rows() != d || op.cols() != d) throw ValidationError("swap_subsystems: shape mismatch");
  Eigen::VectorXi perm(d);  // new index (b, a) -> old index (a, b)
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) perm(b * dim_a + a) = a * dim_b + b;
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = op(perm(i), perm(j));
  return out;
}

Vector swap_subsystems(const Vector& v, int dim_a, int dim_b) {
  const int d = dim_a * dim_b;
  if (v.size() != d) throw ValidationError("swap_subsystems: length mismatch");
  Vector out(d);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) out(b * dim_a + a) = v(a * dim_b + b);
  return out;
}

Matrix swap_operator(int m) {
  Matrix s = Matrix::Zero(m * m, m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s(b * m + a, a * m + b) = 1.0;
  return s;
}

Matrix antisymmetric_projector(int m) {
  return 0.5 * (Matrix::Identity(m * m, m * m) - swap_operator(m));
}

}  // namespace qsw
