#include "qsw/rankopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsw/parallel.hpp"
#include "qsw/random.hpp"
#include "rankopt_detail.hpp"

namespace qsw::rankopt {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw ValidationError("optimizer restarts must be >= 1");
  if (max_iters < 1) throw ValidationError("optimizer max_iters must be >= 1");
  if (!(convergence_tol > 0.0)) throw ValidationError("optimizer convergence_tol must be positive");
}

namespace detail {

namespace {

struct Eigenpair {
  double value;
  Vector vector;
};

Eigenpair extremal_eigenpair(const Matrix& h, Extremum mode) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const Eigen::Index idx = mode == Extremum::Min ? 0 : h.rows() - 1;
  return {es.eigenvalues()(idx), es.eigenvectors().col(idx)};
}

/// Best point of <psi|a|psi> over range(iso), iso with orthonormal columns.
Eigenpair optimize_in(const Matrix& a, const Matrix& iso, Extremum mode) {
  const Matrix compressed = iso.adjoint() * a * iso;
  Eigenpair p = extremal_eigenpair(compressed, mode);
  Vector psi = iso * p.vector;
  psi /= psi.norm();
  return {psi.dot(a * psi).real(), psi};
}

Matrix amplitude(const Vector& v, const BipartiteDims& dims) {
  Matrix amp(dims.m, dims.n);
  for (int a = 0; a < dims.m; ++a)
    for (int b = 0; b < dims.n; ++b) amp(a, b) = v(a * dims.n + b);
  return amp;
}

}  // namespace

bool improves(double candidate, double incumbent, Extremum mode) {
  return mode == Extremum::Min ? candidate < incumbent : candidate > incumbent;
}

SeesawOutcome seesaw_run(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode, const SeesawOptions& opts,
                         Rng& rng) {
  const Matrix id_a = Matrix::Identity(dims.m, dims.m);
  const Matrix id_b = Matrix::Identity(dims.n, dims.n);
  Matrix left = random_isometry(dims.m, r, rng);

  SeesawOutcome out{mode == Extremum::Min ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity(),
                    Vector(), 0, false};
  for (int it = 0; it < opts.max_iters; ++it) {
    Eigenpair pa = optimize_in(a, kron(left, id_b), mode);
    Eigen::JacobiSVD<Matrix> svd_a(amplitude(pa.vector, dims), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix right = svd_a.matrixV().leftCols(r).conjugate();

    Eigenpair pb = optimize_in(a, kron(id_a, right), mode);
    Eigen::JacobiSVD<Matrix> svd_b(amplitude(pb.vector, dims), Eigen::ComputeFullU | Eigen::ComputeFullV);
    left = svd_b.matrixU().leftCols(r);

    const double previous = out.value;
    const Vector previous_psi = out.psi;
    out.iterations = it + 1;
    if (!std::isfinite(previous) || !improves(previous, pb.value, mode)) {
      out.value = pb.value;
      out.psi = pb.vector;
    }
    if (std::isfinite(previous) && std::abs(pb.value - previous) < opts.value_tol) {
      const double moved =
          opts.vector_tol > 0.0 ? std::sqrt(std::max(0.0, 2.0 * (1.0 - std::abs(previous_psi.dot(out.psi))))) : 0.0;
      if (moved <= opts.vector_tol) {
        out.converged = true;
        break;
      }
    }
  }
  return out;
}

namespace {

void realify(const Linearization& lin, Eigen::MatrixXd& jac, Eigen::VectorXd& rhs) {
  const Eigen::Index p = lin.residual.size();
  const Eigen::Index nv = lin.holo.cols();
  Matrix anti = lin.anti.size() == 0 ? Matrix::Zero(p, nv) : lin.anti;
  const Matrix dx = lin.holo + anti;
  const Matrix dy = cplx(0.0, 1.0) * (lin.holo - anti);
  jac.resize(2 * p, 2 * nv);
  jac.topLeftCorner(p, nv) = dx.real();
  jac.topRightCorner(p, nv) = dy.real();
  jac.bottomLeftCorner(p, nv) = dx.imag();
  jac.bottomRightCorner(p, nv) = dy.imag();
  rhs.resize(2 * p);
  rhs.head(p) = -lin.residual.real();
  rhs.tail(p) = -lin.residual.imag();
}

Vector complexify(const Eigen::VectorXd& step) {
  const Eigen::Index nv = step.size() / 2;
  Vector dz(nv);
  for (Eigen::Index i = 0; i < nv; ++i) dz(i) = cplx(step(i), step(nv + i));
  return dz;
}

}  // namespace

Vector gauss_newton_step(const Linearization& lin) {
  Eigen::MatrixXd jac;
  Eigen::VectorXd rhs;
  realify(lin, jac, rhs);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
  cod.setThreshold(1e-12);
  return complexify(cod.solve(rhs));
}


namespace {

/// psi(a, b) = sum_i left(a, i) right(b, i)
Vector compose(const Matrix& left, const Matrix& right) {
  const Eigen::Index m = left.rows();
  const Eigen::Index n = right.rows();
  Vector psi(m * n);
  const Matrix amp = left * right.transpose();
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < n; ++b) psi(a * n + b) = amp(a, b);
  return psi;
}

}  // namespace

double polish_rank_r(const Matrix& complement, const BipartiteDims& dims, Matrix& left, Matrix& right, int max_steps) {
  const int r = static_cast<int>(left.cols());
  const Matrix vdag = complement.adjoint();
  auto residual_of = [&](const Matrix& l, const Matrix& rt) {
    const Vector psi = compose(l, rt);
    const double nrm = psi.norm();
    return nrm > 0.0 ? (vdag * psi).norm() / nrm : std::numeric_limits<double>::infinity();
  };
  double res = residual_of(left, right);
  if (complement.cols() == 0) return 0.0;
  for (int step = 0; step < max_steps && res > 1e-15; ++step) {
    const Eigen::Index nv = (dims.m + dims.n) * r;
    Linearization lin{vdag * compose(left, right), Matrix(complement.cols(), nv), Matrix()};
    Eigen::Index col = 0;
    for (int i = 0; i < r; ++i)
      for (int a = 0; a < dims.m; ++a) {
        Vector ea = Vector::Zero(dims.m);
        ea(a) = 1.0;
        lin.holo.col(col++) = vdag * kron(ea, Vector(right.col(i)));
      }
    for (int i = 0; i < r; ++i)
      for (int b = 0; b < dims.n; ++b) {
        Vector eb = Vector::Zero(dims.n);
        eb(b) = 1.0;
        lin.holo.col(col++) = vdag * kron(Vector(left.col(i)), eb);
      }
    const Vector dz = gauss_newton_step(lin);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving, t *= 0.5) {
      Matrix l2 = left;
      Matrix r2 = right;
      col = 0;
      for (int i = 0; i < r; ++i)
        for (int a = 0; a < dims.m; ++a) l2(a, i) += t * dz(col++);
      for (int i = 0; i < r; ++i)
        for (int b = 0; b < dims.n; ++b) r2(b, i) += t * dz(col++);
      const double nrm = compose(l2, r2).norm();
      if (!(nrm > 0.0)) continue;
      l2 /= nrm;
      const double res2 = residual_of(l2, r2);
      if (res2 < res) {
        left = l2;
        right = r2;
        res = res2;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return res;
}

double polish_ppt_product(const Matrix& complement, const Matrix& pt_complement, const BipartiteDims& dims, Vector& e,
                          Vector& f, int max_steps) {
  const Matrix v1 = complement.adjoint();
  const Matrix v2 = pt_complement.adjoint();
  const Eigen::Index p1 = v1.rows();
  const Eigen::Index p2 = v2.rows();
  auto residual_vec = [&](const Vector& ee, const Vector& ff) {
    Vector r(p1 + p2);
    r.head(p1) = v1 * kron(ee, ff);
    r.tail(p2) = v2 * kron(Vector(ee.conjugate()), ff);
    return r;
  };
  double res = residual_vec(e, f).norm();
  for (int step = 0; step < max_steps && res > 1e-15 && p1 + p2 > 0; ++step) {
    const Eigen::Index nv = dims.m + dims.n;
    Linearization lin{residual_vec(e, f), Matrix::Zero(p1 + p2, nv), Matrix::Zero(p1 + p2, nv)};
    for (int a = 0; a < dims.m; ++a) {
      Vector ea = Vector::Zero(dims.m);
      ea(a) = 1.0;
      lin.holo.col(a).head(p1) = v1 * kron(ea, f);
      lin.anti.col(a).tail(p2) = v2 * kron(ea, f);
    }
    for (int b = 0; b < dims.n; ++b) {
      Vector eb = Vector::Zero(dims.n);
      eb(b) = 1.0;
      lin.holo.col(dims.m + b).head(p1) = v1 * kron(e, eb);
      lin.holo.col(dims.m + b).tail(p2) = v2 * kron(Vector(e.conjugate()), eb);
    }
    const Vector dz = gauss_newton_step(lin);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving, t *= 0.5) {
      Vector e2 = e + t * dz.head(dims.m);
      Vector f2 = f + t * dz.tail(dims.n);
      if (!(e2.norm() > 0.0 && f2.norm() > 0.0)) continue;
      e2 /= e2.norm();
      f2 /= f2.norm();
      const double res2 = residual_vec(e2, f2).norm();
      if (res2 < res) {
        e = e2;
        f = f2;
        res = res2;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return res;
}

std::vector<SeesawOutcome> seesaw_restarts(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode,
                                           const OptimizerConfig& cfg, int first_restart, double vector_tol) {
  const SeesawOptions opts{cfg.max_iters, cfg.convergence_tol, vector_tol};
  return parallel_map(cfg.restarts, [&](int i) {
    Rng rng = restart_rng(cfg.seed, static_cast<std::uint64_t>(first_restart + i));
    return seesaw_run(a, dims, r, mode, opts, rng);
  });
}

bool is_duplicate(const Vector& psi, const std::vector<Vector>& seen, double overlap_tol) {
  for (const auto& s : seen)
    if (std::abs(s.dot(psi)) > 1.0 - overlap_tol) return true;
  return false;
}

}  // namespace detail

RankOptResult extremal_overlap(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode,
                               const OptimizerConfig& cfg) {
  cfg.validate();
  if (a.rows() != dims.total() || a.cols() != dims.total()) throw ValidationError("extremal_overlap: shape mismatch");
  if (r < 1 || r > dims.m) throw ValidationError("extremal_overlap: need 1 <= r <= m");
  if (max_abs(a - a.adjoint()) > 1e-10) throw ValidationError("extremal_overlap: operator is not Hermitian");

  if (r == dims.m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
    const Eigen::Index idx = mode == Extremum::Min ? 0 : a.rows() - 1;
    const Vector v = es.eigenvectors().col(idx);
    PureState psi = PureState::normalized(v, dims);
    const double value = psi.amplitudes().dot(a * psi.amplitudes()).real();
    return RankOptResult{value, psi, schmidt_rank(psi.amplitudes(), dims), true, {value}, 0, 0.0, 1};
  }

  const auto outcomes = detail::seesaw_restarts(a, dims, r, mode, cfg, 0);
  int best = 0;
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    values.push_back(outcomes[i].value);
    if (detail::improves(outcomes[i].value, outcomes[best].value, mode)) best = static_cast<int>(i);
  }
  double gap = 0.0;
  if (values.size() > 1) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    gap = mode == Extremum::Min ? sorted[1] - sorted[0] : sorted[sorted.size() - 1] - sorted[sorted.size() - 2];
  }
  const auto& win = outcomes[best];
  PureState psi = PureState::normalized(win.psi, dims);
  const double value = psi.amplitudes().dot(a * psi.amplitudes()).real();
  return RankOptResult{value,     psi, schmidt_rank(psi.amplitudes(), dims), win.converged, std::move(values), best,
                       gap,       win.iterations};
}

Matrix orthogonal_complement(const Matrix& basis, int dim) {
  if (basis.cols() == 0) return Matrix::Identity(dim, dim);
  const Matrix proj = Matrix::Identity(dim, dim) - basis * basis.adjoint();
  const SpectralData sd = spectral(hermitian_part(proj), 1e-8);
  Matrix out(dim, 0);
  // eigenvalues of a projector are 0 or 1; keep the unit ones.
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i)
    if (sd.eigenvalues(i) > 0.5) keep.push_back(static_cast<int>(i));
  out.resize(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(j) = sd.eigenvectors.col(keep[j]);
  return out;
}

namespace {

void check_basis(const Matrix& basis, const BipartiteDims& dims) {
  if (basis.rows() != dims.total()) throw ValidationError("subspace basis has wrong length");
  if (basis.cols() > 0) {
    const Matrix gram = basis.adjoint() * basis;
    if (max_abs(gram - Matrix::Identity(basis.cols(), basis.cols())) > 1e-10)
      throw ValidationError("subspace basis is not orthonormal");
  }
}

constexpr double kPolishTrigger = 1e-3;
constexpr double kProductAccept = 1e-7;
constexpr double kStallFloor = 1e-4;
constexpr double kTailAccept = 1e-10;

}  // namespace

ProductSearch find_product_vector(const Matrix& subspace_basis, const BipartiteDims& dims, const OptimizerConfig& cfg) {
  cfg.validate();
  check_basis(subspace_basis, dims);
  ProductSearch out;
  out.restarts = cfg.restarts;
  out.best_residual = std::numeric_limits<double>::infinity();
  if (subspace_basis.cols() == 0) {
    out.best_residual = 1.0;
    out.stalled = true;
    return out;
  }
  const Matrix complement = orthogonal_complement(subspace_basis, dims.total());
  const Matrix q = complement * complement.adjoint();
  const auto outcomes = detail::seesaw_restarts(q, dims, 1, Extremum::Min, cfg, 0);

  std::vector<Vector> seen;
  for (const auto& o : outcomes) {
    double res = std::sqrt(std::max(o.value, 0.0));
    Matrix amp(dims.m, dims.n);
    for (int a = 0; a < dims.m; ++a)
      for (int b = 0; b < dims.n; ++b) amp(a, b) = o.psi(a * dims.n + b);
    Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix left = svd.matrixU().leftCols(1) * svd.singularValues()(0);
    Matrix right = svd.matrixV().leftCols(1).conjugate();
    if (res < kPolishTrigger) res = detail::polish_rank_r(complement, dims, left, right, 60);
    out.best_residual = std::min(out.best_residual, res);
    if (res > kProductAccept) continue;
    Vector e = left.col(0);
    Vector f = right.col(0);
    e /= e.norm();
    f /= f.norm();
    const cplx phase = f(0) != cplx(0.0) ? std::conj(f(0)) / std::abs(f(0)) : cplx(1.0);
    f *= phase;
    e /= phase;
    PureState state = PureState::normalized(kron(e, f), dims);
    if (detail::is_duplicate(state.amplitudes(), seen, 1e-6)) continue;
    seen.push_back(state.amplitudes());
    out.candidates.push_back(ProductVector{e, f, state, res});
  }
  if (!out.candidates.empty()) out.found = out.candidates.front();
  out.stalled = out.best_residual > kStallFloor;
  return out;
}

RankVectorSearch find_rank_r_vector(const Matrix& subspace_basis, const BipartiteDims& dims, int r,
                                    const OptimizerConfig& cfg) {
  cfg.validate();
  check_basis(subspace_basis, dims);
  if (r < 1) throw ValidationError("find_rank_r_vector: r must be >= 1");
  RankVectorSearch out;
  out.restarts = cfg.restarts;
  if (subspace_basis.cols() == 0) return out;
  if (r >= dims.m) {
    PureState psi = PureState::normalized(subspace_basis.col(0), dims);
    out.best_tail = 0.0;
    out.candidates.push_back(psi);
    out.found = psi;
    return out;
  }
  const Matrix complement = orthogonal_complement(subspace_basis, dims.total());
  const Matrix q = complement * complement.adjoint();
  const Matrix proj = subspace_basis * subspace_basis.adjoint();
  const auto outcomes = detail::seesaw_restarts(q, dims, r, Extremum::Min, cfg, 0);

  std::vector<Vector> seen;
  for (const auto& o : outcomes) {
    double res = std::sqrt(std::max(o.value, 0.0));
    Matrix amp(dims.m, dims.n);
    for (int a = 0; a < dims.m; ++a)
      for (int b = 0; b < dims.n; ++b) amp(a, b) = o.psi(a * dims.n + b);
    Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix left = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();
    Matrix right = svd.matrixV().leftCols(r).conjugate();
    Vector candidate = o.psi;
    if (res < kPolishTrigger) {
      detail::polish_rank_r(complement, dims, left, right, 60);
      const Matrix amp2 = left * right.transpose();
      for (int a = 0; a < dims.m; ++a)
        for (int b = 0; b < dims.n; ++b) candidate(a * dims.n + b) = amp2(a, b);
    }
    Vector projected = proj * candidate;
    if (!(projected.norm() > 0.0)) continue;
    projected /= projected.norm();
    const double tail = schmidt_tail(projected, dims, r);
    out.best_tail = std::min(out.best_tail, tail);
    if (tail > kTailAccept) continue;
    if (detail::is_duplicate(projected, seen, 1e-6)) continue;
    seen.push_back(projected);
    out.candidates.push_back(PureState::normalized(projected, dims));
  }
  if (!out.candidates.empty()) out.found = out.candidates.front();
  return out;
}

ProductSearch find_ppt_product_vector(const Matrix& range_basis, const Matrix& pt_range_basis,
                                      const BipartiteDims& dims, const OptimizerConfig& cfg) {
  cfg.validate();
  check_basis(range_basis, dims);
  check_basis(pt_range_basis, dims);
  ProductSearch out;
  out.restarts = cfg.restarts;
  out.best_residual = std::numeric_limits<double>::infinity();
  const Matrix c1 = orthogonal_complement(range_basis, dims.total());
  const Matrix c2 = orthogonal_complement(pt_range_basis, dims.total());
  const Matrix q1 = c1 * c1.adjoint();
  const Matrix q2 = c2 * c2.adjoint();
  const Matrix id_a = Matrix::Identity(dims.m, dims.m);
  const Matrix id_b = Matrix::Identity(dims.n, dims.n);

  struct Outcome {
    double residual;
    Vector e, f;
  };
  const auto outcomes = parallel_map(cfg.restarts, [&](int i) {
    Rng rng = restart_rng(cfg.seed, static_cast<std::uint64_t>(i));
    Vector e = random_unit_vector(dims.m, rng);
    Vector f = random_unit_vector(dims.n, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
      // f-step: both terms are quadratic forms in f.
      const Matrix ue = kron(Matrix(e), id_b);
      const Matrix uec = kron(Matrix(e.conjugate()), id_b);
      const Matrix hf = ue.adjoint() * q1 * ue + uec.adjoint() * q2 * uec;
      Eigen::SelfAdjointEigenSolver<Matrix> esf(hermitian_part(hf));
      f = esf.eigenvectors().col(0);
      // e-step: <e* f|q2|e* f> = e^dagger G^T e with G the f-compression of q2.
      const Matrix uf = kron(id_a, Matrix(f));
      const Matrix g2 = uf.adjoint() * q2 * uf;
      const Matrix he = uf.adjoint() * q1 * uf + g2.transpose();
      Eigen::SelfAdjointEigenSolver<Matrix> ese(hermitian_part(he));
      e = ese.eigenvectors().col(0);
      const double value = ese.eigenvalues()(0);
      if (std::abs(prev - value) < cfg.convergence_tol) break;
      prev = value;
    }
    double res = std::sqrt(std::max(0.0, (kron(e, f).dot(q1 * kron(e, f)) +
                                          kron(Vector(e.conjugate()), f).dot(q2 * kron(Vector(e.conjugate()), f)))
                                             .real()));
    if (res < kPolishTrigger) res = detail::polish_ppt_product(c1, c2, dims, e, f, 60);
    return Outcome{res, e, f};
  });

  std::vector<Vector> seen;
  for (const auto& o : outcomes) {
    out.best_residual = std::min(out.best_residual, o.residual);
    if (o.residual > kProductAccept) continue;
    Vector e = o.e;
    Vector f = o.f;
    const cplx phase = f(0) != cplx(0.0) ? std::conj(f(0)) / std::abs(f(0)) : cplx(1.0);
    f *= phase;
    e /= phase;
    PureState state = PureState::normalized(kron(e, f), dims);
    if (detail::is_duplicate(state.amplitudes(), seen, 1e-6)) continue;
    seen.push_back(state.amplitudes());
    out.candidates.push_back(ProductVector{e, f, state, o.residual});
  }
  if (!out.candidates.empty()) out.found = out.candidates.front();
  out.stalled = out.best_residual > kStallFloor;
  return out;
}

}  // namespace qsw::rankopt
