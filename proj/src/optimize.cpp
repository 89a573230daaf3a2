#include "qsw/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsw/parallel.hpp"
#include "qsw/random.hpp"
#include "rankopt_detail.hpp"

namespace qsw::rankopt {

namespace {

constexpr double kTangentValueTol = 1e-6;
// Stacked-vector rank cut: absolute floor and fraction of the largest singular value.
constexpr double kSpanCut = 1e-6;
constexpr double kSpanRelativeCut = 1e-3;
constexpr double kSubtractionTol = 1e-9;
constexpr double kTangentVectorTol = 1e-11;

Matrix as_matrix(const Vector& v, const BipartiteDims& dims) {
  Matrix out(dims.m, dims.n);
  for (int a = 0; a < dims.m; ++a)
    for (int b = 0; b < dims.n; ++b) out(a, b) = v(a * dims.n + b);
  return out;
}

Vector as_vector(const Matrix& x) {
  Vector out(x.size());
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) out(a * x.cols() + b) = x(a, b);
  return out;
}

struct Factors {
  Matrix left;
  Matrix right;
};

/// Balanced factors with psi = vec(left * right^T) and ||psi|| = 1.
Factors balance(Matrix left, Matrix right) {
  const double nrm = (left * right.transpose()).norm();
  left /= nrm;
  const double s = std::sqrt(right.norm() / std::max(left.norm(), 1e-300));
  left *= s;
  right /= s;
  return {left, right};
}

Factors split(const Vector& psi, const BipartiteDims& dims, int r) {
  Eigen::JacobiSVD<Matrix> svd(as_matrix(psi, dims), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int keep = std::min<int>(r, static_cast<int>(svd.singularValues().size()));
  Matrix left = svd.matrixU().leftCols(keep) * svd.singularValues().head(keep).asDiagonal();
  Matrix right = svd.matrixV().leftCols(keep).conjugate();
  return balance(left, right);
}

using quad = __float128;

struct QuadComplex {
  quad re = 0;
  quad im = 0;
  void add_product(cplx a, cplx b) {
    re += static_cast<quad>(a.real()) * b.real() - static_cast<quad>(a.imag()) * b.imag();
    im += static_cast<quad>(a.real()) * b.imag() + static_cast<quad>(a.imag()) * b.real();
  }
  void add_product(cplx a, const QuadComplex& b) {
    re += a.real() * b.re - a.imag() * b.im;
    im += a.real() * b.im + a.imag() * b.re;
  }
  cplx rounded() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

using QuadMatrix = std::vector<QuadComplex>;  // row-major

/// psi = vec(left right^T) and W psi, accumulated in quad precision.
QuadMatrix apply_quad(const Matrix& w, const Factors& x, const BipartiteDims& dims, QuadMatrix& psi) {
  const int r = static_cast<int>(x.left.cols());
  const int dim = dims.total();
  psi.assign(dim, QuadComplex{});
  for (int a = 0; a < dims.m; ++a)
    for (int b = 0; b < dims.n; ++b)
      for (int i = 0; i < r; ++i) psi[a * dims.n + b].add_product(x.left(a, i), x.right(b, i));
  QuadMatrix out(dim);
  for (int row = 0; row < dim; ++row)
    for (int col = 0; col < dim; ++col) out[row].add_product(w(row, col), psi[col]);
  return out;
}

/// Stationarity residual of <psi|W|psi> on the rank-r set, stacked
/// [Phi conj(R); L^dag Phi; L^dag L - R^dag R; ||psi||^2 - 1] with Phi = mat(W psi).
Vector stationarity(const Matrix& w, const BipartiteDims& dims, const Factors& x) {
  const int r = static_cast<int>(x.left.cols());
  QuadMatrix psi;
  const QuadMatrix phi = apply_quad(w, x, dims, psi);
  Vector out(dims.m * r + r * dims.n + r * r + 1);
  Eigen::Index k = 0;
  for (int a = 0; a < dims.m; ++a)
    for (int i = 0; i < r; ++i) {
      QuadComplex acc;
      for (int b = 0; b < dims.n; ++b) acc.add_product(std::conj(x.right(b, i)), phi[a * dims.n + b]);
      out(k++) = acc.rounded();
    }
  for (int i = 0; i < r; ++i)
    for (int b = 0; b < dims.n; ++b) {
      QuadComplex acc;
      for (int a = 0; a < dims.m; ++a) acc.add_product(std::conj(x.left(a, i)), phi[a * dims.n + b]);
      out(k++) = acc.rounded();
    }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      QuadComplex acc;
      for (int a = 0; a < dims.m; ++a) acc.add_product(std::conj(x.left(a, i)), x.left(a, j));
      for (int b = 0; b < dims.n; ++b) acc.add_product(-std::conj(x.right(b, i)), x.right(b, j));
      out(k++) = acc.rounded();
    }
  quad nrm = -1;
  for (const auto& c : psi) nrm += c.re * c.re + c.im * c.im;
  out(k) = cplx(static_cast<double>(nrm), 0.0);
  return out;
}

detail::Linearization linearize_stationarity(const Matrix& w, const BipartiteDims& dims, const Factors& x) {
  const int r = static_cast<int>(x.left.cols());
  const Eigen::Index nv = (dims.m + dims.n) * r;
  const Vector res = stationarity(w, dims, x);
  const Vector psi = as_vector(x.left * x.right.transpose());
  const Matrix phi = as_matrix(w * psi, dims);
  detail::Linearization lin{res, Matrix(res.size(), nv), Matrix::Zero(res.size(), nv)};
  Eigen::Index col = 0;
  auto push = [&](const Vector& dpsi, const Matrix& anti1, const Matrix& anti2, const Matrix& gauge_holo,
                  const Matrix& gauge_anti) {
    const Matrix dphi = as_matrix(w * dpsi, dims);
    const cplx dn = psi.dot(dpsi);
    Vector h(res.size());
    h << as_vector(Matrix(dphi * x.right.conjugate())), as_vector(Matrix(x.left.adjoint() * dphi)),
        as_vector(gauge_holo), dn;
    lin.holo.col(col) = h;
    Vector a(res.size());
    a << as_vector(anti1), as_vector(anti2), as_vector(gauge_anti), std::conj(dn);
    lin.anti.col(col) = a;
    ++col;
  };
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < dims.m; ++a) {
      Matrix dl = Matrix::Zero(dims.m, r);
      dl(a, i) = 1.0;
      Matrix anti2 = Matrix::Zero(r, dims.n);
      anti2.row(i) = phi.row(a);
      Matrix gh = Matrix::Zero(r, r);
      gh.col(i) = x.left.row(a).adjoint();
      Matrix ga = Matrix::Zero(r, r);
      ga.row(i) = x.left.row(a);
      push(as_vector(dl * x.right.transpose()), Matrix::Zero(dims.m, r), anti2, gh, ga);
    }
  for (int i = 0; i < r; ++i)
    for (int b = 0; b < dims.n; ++b) {
      Matrix dr = Matrix::Zero(dims.n, r);
      dr(b, i) = 1.0;
      Matrix anti1 = Matrix::Zero(dims.m, r);
      anti1.col(i) = phi.col(b);
      Matrix gh = Matrix::Zero(r, r);
      gh.col(i) = -x.right.row(b).adjoint();
      Matrix ga = Matrix::Zero(r, r);
      ga.row(i) = -x.right.row(b);
      push(as_vector(x.left * dr.transpose()), anti1, Matrix::Zero(r, dims.n), gh, ga);
    }
  return lin;
}

Vector lowest_in(const Matrix& w, const Matrix& iso) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(iso.adjoint() * w * iso));
  return iso * es.eigenvectors().col(0);
}

/// One see-saw sweep: re-solve over span(left) (x) C^n, then over C^m (x) span(right).
Vector sweep(const Matrix& w, const BipartiteDims& dims, const Vector& psi, int r) {
  Eigen::JacobiSVD<Matrix> sa(as_matrix(psi, dims), Eigen::ComputeThinU);
  Vector out = lowest_in(w, kron(Matrix(sa.matrixU().leftCols(r)), Matrix(Matrix::Identity(dims.n, dims.n))));
  Eigen::JacobiSVD<Matrix> sb(as_matrix(out, dims), Eigen::ComputeThinV);
  out = lowest_in(w, kron(Matrix(Matrix::Identity(dims.m, dims.m)), Matrix(sb.matrixV().leftCols(r).conjugate())));
  return out / out.norm();
}

/// Newton steps on the stationarity residual, each followed by a see-saw sweep.
Vector polish_tangent(const Matrix& w, const BipartiteDims& dims, Vector psi, int r, int max_steps) {
  Factors x = split(psi, dims, r);
  double res = stationarity(w, dims, x).norm();
  for (int step = 0; step < max_steps && res > 1e-15; ++step) {
    const Vector dz = detail::gauss_newton_step(linearize_stationarity(w, dims, x));
    bool accepted = false;
    double t = 1.0;
    for (int halving = 0; halving < 8 && !accepted; ++halving, t *= 0.5) {
      Matrix l2 = x.left;
      Matrix r2 = x.right;
      Eigen::Index col = 0;
      for (int i = 0; i < r; ++i)
        for (int a = 0; a < dims.m; ++a) l2(a, i) += t * dz(col++);
      for (int i = 0; i < r; ++i)
        for (int b = 0; b < dims.n; ++b) r2(b, i) += t * dz(col++);
      if (!((l2 * r2.transpose()).norm() > 0.0)) continue;
      const Factors moved = balance(l2, r2);
      const Vector cand = sweep(w, dims, as_vector(moved.left * moved.right.transpose()), r);
      const Factors y = split(cand, dims, r);
      const double res2 = stationarity(w, dims, y).norm();
      if (res2 < res) {
        x = y;
        psi = cand;
        res = res2;
        accepted = true;
      }
    }
    if (!accepted) {
      Vector cand = psi;
      for (int i = 0; i < 10; ++i) cand = sweep(w, dims, cand, r);
      const Factors y = split(cand, dims, r);
      const double res2 = stationarity(w, dims, y).norm();
      if (!(res2 < res)) break;
      x = y;
      psi = cand;
      res = res2;
    }
  }
  return psi;
}

/// Directions delta psi, tangent to the rank-r set at psi, along which the second
/// variation of <psi|W|psi> vanishes (relative cut 1e-6). Assumes psi is stationary with value 0.
std::vector<Vector> flat_directions(const Matrix& w, const BipartiteDims& dims, const Vector& psi, int r) {
  const Factors x = split(psi, dims, r);
  const Matrix phi = as_matrix(w * psi, dims);
  const int nv = (dims.m + dims.n) * r;
  auto unpack = [&](const Eigen::VectorXd& v, Matrix& dl, Matrix& dr) {
    dl.resize(dims.m, r);
    dr.resize(dims.n, r);
    int c = 0;
    for (int i = 0; i < r; ++i)
      for (int a = 0; a < dims.m; ++a, ++c) dl(a, i) = cplx(v(c), v(nv + c));
    for (int i = 0; i < r; ++i)
      for (int b = 0; b < dims.n; ++b, ++c) dr(b, i) = cplx(v(c), v(nv + c));
  };
  auto variation = [&](const Eigen::VectorXd& v) {
    Matrix dl;
    Matrix dr;
    unpack(v, dl, dr);
    const Vector dpsi = as_vector(dl * x.right.transpose() + x.left * dr.transpose());
    const Matrix cross = dl * dr.transpose();
    return dpsi.dot(w * dpsi).real() + 2.0 * (phi.conjugate().cwiseProduct(cross)).sum().real();
  };
  const int dim = 2 * nv;
  Eigen::MatrixXd hess(dim, dim);
  Eigen::VectorXd diag(dim);
  for (int i = 0; i < dim; ++i) diag(i) = variation(Eigen::VectorXd::Unit(dim, i));
  for (int i = 0; i < dim; ++i) {
    hess(i, i) = diag(i);
    for (int j = i + 1; j < dim; ++j) {
      const double both = variation(Eigen::VectorXd::Unit(dim, i) + Eigen::VectorXd::Unit(dim, j));
      hess(i, j) = hess(j, i) = 0.5 * (both - diag(i) - diag(j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Vector> out;
  for (int i = 0; i < dim; ++i) {
    if (es.eigenvalues()(i) > 1e-6 * scale) break;
    Matrix dl;
    Matrix dr;
    unpack(es.eigenvectors().col(i), dl, dr);
    const Vector dpsi = as_vector(dl * x.right.transpose() + x.left * dr.transpose());
    if (dpsi.norm() > 1e-8) out.push_back(dpsi / dpsi.norm());
  }
  return out;
}

struct SpanInfo {
  int rank = 0;
  Matrix complement;
};

SpanInfo span_of(const std::vector<Vector>& vectors, int dim) {
  if (vectors.empty()) return {0, Matrix::Identity(dim, dim)};
  Matrix stacked(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) stacked.col(static_cast<Eigen::Index>(j)) = vectors[j];
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullU);
  const RealVector& s = svd.singularValues();
  const double cut = std::max(kSpanCut, kSpanRelativeCut * s(0));
  int rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return {rank, svd.matrixU().rightCols(dim - rank)};
}

}  // namespace

TangentSet tangent_set(const Matrix& w, const BipartiteDims& dims, int k, const OptimizerConfig& cfg) {
  cfg.validate();
  if (k < 2 || k > dims.m) throw ValidationError("tangent_set: need 2 <= k <= m");
  const int dim = dims.total();
  const int target = 3 * dim;
  const int budget = std::max(cfg.restarts, 8 * target);

  TangentSet out;
  std::vector<Vector> seen;
  int used = 0;
  while (used < budget && static_cast<int>(seen.size()) < target) {
    OptimizerConfig batch = cfg;
    batch.restarts = std::min(cfg.restarts, budget - used);
    const auto outcomes = detail::seesaw_restarts(w, dims, k - 1, Extremum::Min, batch, used, kTangentVectorTol);
    used += batch.restarts;
    for (const auto& o : outcomes) {
      if (std::abs(o.value) > 1e-3) continue;
      const Vector psi = polish_tangent(w, dims, o.psi / o.psi.norm(), k - 1, 100);
      if (std::abs(psi.dot(w * psi).real()) > kTangentValueTol) continue;
      if (detail::is_duplicate(psi, seen, 1e-6)) continue;
      seen.push_back(psi);
      out.vectors.push_back(PureState::normalized(psi, dims));
    }
  }
  out.restarts_used = used;

  const SpanInfo plain = span_of(seen, dim);
  out.span_dim = plain.rank;
  out.complement_basis = plain.complement;
  std::vector<Vector> extended = seen;
  for (const Vector& psi : seen)
    for (Vector& d : flat_directions(w, dims, psi, k - 1)) extended.push_back(std::move(d));
  const SpanInfo ext = span_of(extended, dim);
  out.extended_span_dim = ext.rank;
  out.extended_complement_basis = ext.complement;
  return out;
}

TangentSet tangent_set(const witness::Witness& w, const OptimizerConfig& cfg) {
  return tangent_set(w.matrix(), w.dims(), w.k(), cfg);
}

namespace {

/// Smallest eigenvalue of P^{-1/2} W P^{-1/2} on the range of the compressed P.
double block_value(const Matrix& w, const Matrix& p, const Matrix& iso) {
  const Matrix pc = hermitian_part(iso.adjoint() * p * iso);
  const Matrix wc = hermitian_part(iso.adjoint() * w * iso);
  const SpectralData sp = spectral(pc);
  if (sp.rank == 0) return std::numeric_limits<double>::infinity();
  Matrix scale = sp.range_basis;
  for (int i = 0; i < sp.rank; ++i) {
    // range columns are ordered by eigenvalue; find the matching one
    const Vector v = sp.range_basis.col(i);
    const double lam = v.dot(pc * v).real();
    scale.col(i) = v / std::sqrt(lam);
  }
  const Matrix m = hermitian_part(scale.adjoint() * wc * scale);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix pair_isometry(const Matrix& e12, int n) {
  return kron(e12, Matrix(Matrix::Identity(n, n)));
}

}  // namespace

BlockCheck block_compression_check(const Matrix& w, const Matrix& p, const BipartiteDims& dims,
                                   const OptimizerConfig& cfg) {
  cfg.validate();
  const int pairs = std::min(dims.m, 2);
  const auto values = parallel_map(cfg.restarts, [&](int i) {
    Rng rng = restart_rng(cfg.seed ^ 0xb10cULL, static_cast<std::uint64_t>(i));
    Matrix e12 = random_isometry(dims.m, pairs, rng);
    double best = block_value(w, p, pair_isometry(e12, dims.n));
    // pattern search on the pair with a shrinking step
    double step = 0.3;
    for (int it = 0; it < 60 && step > 1e-4; ++it) {
      Matrix trial = e12 + step * random_isometry(dims.m, pairs, rng);
      Eigen::HouseholderQR<Matrix> qr(trial);
      trial = qr.householderQ() * Matrix::Identity(dims.m, pairs);
      const double v = block_value(w, p, pair_isometry(trial, dims.n));
      if (v < best) {
        best = v;
        e12 = trial;
      } else {
        step *= 0.8;
      }
    }
    return best;
  });
  BlockCheck out;
  out.samples = cfg.restarts;
  out.estimate = *std::min_element(values.begin(), values.end());
  out.admissible = out.estimate > 0.0;
  return out;
}

namespace {

bool still_certified(const Matrix& w, const BipartiteDims& dims, int k, const OptimizerConfig& cfg) {
  return extremal_overlap(w, dims, k - 1, Extremum::Min, cfg).value >= -kCertificationTol;
}

/// Largest lambda (bisection to 1e-6) keeping the rank-(k-1) minimum of w - lambda * p
/// above -1e-9, so the result still has a usable tangent set.
double largest_subtraction(const Matrix& w, const Matrix& p, const BipartiteDims& dims, int k,
                           const OptimizerConfig& cfg) {
  auto still_certified = [&](const Matrix& x, const BipartiteDims& d, int kk, const OptimizerConfig& c) {
    return extremal_overlap(x, d, kk - 1, Extremum::Min, c).value >= -kSubtractionTol;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (still_certified(hermitian_part(w - hi * p), dims, k, cfg)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return lo;
  }
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (still_certified(hermitian_part(w - mid * p), dims, k, cfg))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

OptimizedWitness optimize_witness(const witness::Witness& w, const OptimizerConfig& cfg) {
  cfg.validate();
  const BipartiteDims& dims = w.dims();
  const int k = w.k();
  const int dim = dims.total();
  if (!still_certified(w.matrix(), dims, k, cfg))
    throw CertificationError("optimize_witness: input is not a valid witness at lambda = 0",
                             extremal_overlap(w.matrix(), dims, k - 1, Extremum::Min, cfg).value);

  Matrix current = w.matrix();
  std::vector<OptimizationRound> rounds;
  int span = 0;
  bool optimal = false;
  for (int round = 0; round < kMaxSubtractionRounds; ++round) {
    const TangentSet ts = tangent_set(current, dims, k, cfg);
    span = ts.span_dim;
    if (span == dim) {
      optimal = true;
      break;
    }
    OptimizationRound rec;
    rec.span_dim = span;
    double best_gain = 0.0;
    Matrix best_p;
    for (int variant = 0; variant < 2; ++variant) {
      const Matrix& basis = variant == 0 ? ts.complement_basis : ts.extended_complement_basis;
      if (basis.cols() == 0) continue;
      if (variant == 1 && basis.cols() == ts.complement_basis.cols()) continue;
      const Matrix p = basis * basis.adjoint();
      const double lambda = largest_subtraction(current, p, dims, k, cfg);
      const double gain = lambda * static_cast<double>(basis.cols());
      if (gain > best_gain) {
        best_gain = gain;
        best_p = p;
        rec.lambda = lambda;
        rec.projector_rank = static_cast<int>(basis.cols());
        rec.used_extended = variant == 1;
      }
    }
    if (k == 2 && best_p.size() > 0) rec.block = block_compression_check(current, best_p, dims, cfg);
    rounds.push_back(rec);
    if (rec.lambda <= kBisectionTol) break;
    current = hermitian_part(current - rec.lambda * best_p);
  }
  if (!optimal && static_cast<int>(rounds.size()) == kMaxSubtractionRounds) {
    const TangentSet ts = tangent_set(current, dims, k, cfg);
    span = ts.span_dim;
    optimal = span == dim;
  }
  witness::Witness result = witness::Witness::certify(current, dims, k, witness::Provenance::Optimized, cfg);
  return OptimizedWitness{std::move(result), optimal, span, std::move(rounds)};
}

}  // namespace qsw::rankopt
