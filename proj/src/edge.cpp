#include "qsw/edge.hpp"

#include <algorithm>
#include <cmath>

#include "qsw/random.hpp"

namespace qsw::edge {

namespace {

constexpr double kRangeTol = 1e-7;
constexpr double kPsdTol = 1e-9;
constexpr double kEmptyTrace = 1e-10;

double inverse_bound(const SpectralData& sd, const Vector& v) {
  const double q = v.dot(sd.pseudo_inverse() * v).real();
  return q > 0.0 ? 1.0 / q : 0.0;
}

double range_residual(const SpectralData& sd, const Vector& v) {
  return (v - sd.range_basis * (sd.range_basis.adjoint() * v)).norm();
}

/// Unit phase making the largest-magnitude entry real and positive.
Vector fix_phase(Vector v) {
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (std::abs(v(at)) > 0.0) v *= std::conj(v(at)) / std::abs(v(at));
  return v;
}

}  // namespace

Subtraction subtract_pure(const PositiveOperator& rho, const PureState& psi) {
  if (!(rho.dims() == psi.dims())) throw ValidationError("subtract_pure: dimension mismatch");
  const SpectralData sd = spectral(rho.matrix());
  const Vector& v = psi.amplitudes();
  const double residual = range_residual(sd, v);
  if (residual > kRangeTol)
    throw ValidationError("subtract_pure: vector is not in the range (residual " + std::to_string(residual) + ")");
  const double lambda = inverse_bound(sd, v);
  if (lambda < 1e-12) throw NumericalError("subtract_pure: degenerate subtraction, lambda below 1e-12");
  const Matrix rem = hermitian_part(rho.matrix() - lambda * psi.projector());
  const SpectralData rs = spectral(rem);
  if (rs.min_eigenvalue() < -kPsdTol)
    throw NumericalError("subtract_pure: remainder has eigenvalue " + std::to_string(rs.min_eigenvalue()));
  return Subtraction{lambda, PositiveOperator(rem, rho.dims()), sd.rank, rs.rank, residual};
}

EdgeTest is_edge_state(const PositiveOperator& delta, int k, const OptimizerConfig& cfg) {
  const BipartiteDims& dims = delta.dims();
  if (k < 2 || k > dims.m) throw ValidationError("is_edge_state: need 2 <= k <= m");
  const SpectralData sd = spectral(delta.matrix());
  EdgeTest out;
  if (sd.rank == 0) {
    out.is_edge = true;
    return out;
  }
  const auto search = rankopt::find_rank_r_vector(sd.range_basis, dims, k - 1, cfg);
  out.best_tail = search.best_tail;
  out.restarts = search.restarts;
  out.is_edge = !search.found.has_value();
  if (search.found) out.witness_vector = *search.found;
  return out;
}

namespace {

struct Pick {
  PureState state;
  double lambda = 0.0;
};

std::optional<Pick> best_candidate(const Matrix& current, const BipartiteDims& dims, int k, const OptimizerConfig& cfg,
                                   bool preserve_ppt) {
  const SpectralData sd = spectral(current);
  if (sd.rank == 0) return std::nullopt;
  std::optional<Pick> best;
  auto consider = [&](const PureState& c, double lambda) {
    if (lambda >= 1e-12 && (!best || lambda > best->lambda)) best = Pick{c, lambda};
  };
  if (preserve_ppt) {
    const SpectralData pt = spectral(hermitian_part(partial_transpose(current, dims, Side::A)));
    const auto search = rankopt::find_ppt_product_vector(sd.range_basis, pt.range_basis, dims, cfg);
    for (const auto& c : search.candidates) {
      const Vector partner = kron(Vector(c.e.conjugate()), c.f);
      consider(c.state, std::min(inverse_bound(sd, c.state.amplitudes()), inverse_bound(pt, partner)));
    }
  } else {
    const auto search = rankopt::find_rank_r_vector(sd.range_basis, dims, k - 1, cfg);
    for (const auto& c : search.candidates) consider(c, inverse_bound(sd, c.amplitudes()));
  }
  return best;
}

}  // namespace

EdgeDecomposition edge_decompose(const PositiveOperator& rho, int k, const OptimizerConfig& cfg,
                                 const DecomposeOptions& opts) {
  const BipartiteDims& dims = rho.dims();
  if (k < 2 || k > dims.m) throw ValidationError("edge_decompose: need 2 <= k <= m");
  if (opts.preserve_ppt && k != 2) throw ValidationError("edge_decompose: PPT-preserving mode requires k = 2");
  Matrix current = rho.matrix();
  std::vector<Component> components;
  int steps = 0;
  for (int step = 0; step < opts.max_steps; ++step) {
    if (current.trace().real() <= kEmptyTrace) break;
    const auto pick = best_candidate(current, dims, k, cfg, opts.preserve_ppt);
    if (!pick) break;
    current = hermitian_part(current - pick->lambda * pick->state.projector());
    components.push_back(Component{pick->lambda, pick->state, schmidt_rank(pick->state.amplitudes(), dims)});
    steps = step + 1;
  }
  const double p = current.trace().real();
  Matrix sum = current;
  for (const auto& c : components) sum += c.weight * c.state.projector();
  const double error = max_abs(sum - rho.matrix());
  return EdgeDecomposition{p, std::move(components), PositiveOperator(current, dims), k, p <= kEmptyTrace,
                           opts.preserve_ppt, error, steps};
}

EdgeDecomposition edge_decompose(const DensityMatrix& rho, int k, const OptimizerConfig& cfg,
                                 const DecomposeOptions& opts) {
  return edge_decompose(PositiveOperator(rho), k, cfg, opts);
}

DensityMatrix ppt_edge_state(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  if (!is_ppt(rho).ppt) throw ValidationError("ppt_edge_state: state is not PPT");
  const auto dec = edge_decompose(rho, 2, cfg, DecomposeOptions{true, 256});
  if (dec.fully_decomposed)
    throw ValidationError("ppt_edge_state: state decomposes fully into PPT-compatible product vectors");
  return dec.delta.normalized();
}

Schmidt2Certificate rank4_schmidt2(const DensityMatrix& delta, const OptimizerConfig& cfg) {
  const BipartiteDims& dims = delta.dims();
  if (dims.m != 3 || dims.n != 3) throw ValidationError("rank4_schmidt2 applies to 3 x 3 states");
  const SpectralData sd = spectral(delta.matrix());
  if (sd.rank != 4) throw ValidationError("rank4_schmidt2: state has rank " + std::to_string(sd.rank) + ", need 4");
  if (!is_ppt(delta, 1e-9).ppt) throw ValidationError("rank4_schmidt2: state is not PPT");

  Schmidt2Certificate cert;
  Schmidt2Telemetry& tel = cert.telemetry;
  const auto search = rankopt::find_product_vector(sd.kernel_basis, dims, cfg);
  tel.kernel_search_restarts = search.restarts;
  if (!search.found)
    throw CertificationError("rank4_schmidt2: no product vector found in the kernel", search.best_residual);
  const Vector e1 = fix_phase(search.found->e);
  const Vector f = search.found->f;
  tel.kernel_a = e1;
  tel.kernel_b = f;
  tel.kernel_residual = search.found->residual;

  const Matrix rest = rankopt::orthogonal_complement(e1, 3);
  Matrix basis(3, 3);
  basis.col(0) = e1;
  basis.col(1) = fix_phase(rest.col(0));
  basis.col(2) = fix_phase(rest.col(1));
  tel.a_basis = basis;

  PositiveOperator current(delta);
  auto peel = [&](const Vector& a_vec, double& lambda_out, int& rank_out, double& min_out) {
    const Vector image = current.matrix() * kron(a_vec, f);
    if (image.norm() <= 1e-12) {
      lambda_out = 0.0;
      const SpectralData s = spectral(current.matrix());
      rank_out = s.rank;
      min_out = s.min_eigenvalue();
      return;
    }
    const PureState unit = PureState::normalized(image, dims);
    Subtraction sub = subtract_pure(current, unit);
    lambda_out = sub.lambda / image.squaredNorm();
    rank_out = sub.rank_after;
    min_out = spectral(sub.remainder.matrix()).min_eigenvalue();
    if (min_out < -kPsdTol) throw NumericalError("rank4_schmidt2: remainder eigenvalue " + std::to_string(min_out));
    cert.components.emplace_back(sub.lambda, unit);
    current = sub.remainder;
  };
  peel(basis.col(1), tel.first_lambda, tel.rank_after_first, tel.min_eigenvalue_after_first);
  peel(basis.col(2), tel.second_lambda, tel.rank_after_second, tel.min_eigenvalue_after_second);

  const SpectralData last = spectral(current.matrix());
  for (int i = 0; i < last.rank; ++i) {
    const double mu = last.eigenvalues(i);
    if (mu < -kPsdTol) throw NumericalError("rank4_schmidt2: final remainder eigenvalue " + std::to_string(mu));
    cert.components.emplace_back(mu, PureState::normalized(last.eigenvectors.col(i), dims));
  }
  Matrix sum = Matrix::Zero(9, 9);
  for (const auto& [w, psi] : cert.components) {
    if (schmidt_rank(psi.amplitudes(), dims, kRankTol) > 2)
      throw NumericalError("rank4_schmidt2: component of Schmidt rank above 2");
    sum += w * psi.projector();
  }
  cert.reconstruction_error = max_abs(sum - delta.matrix());
  return cert;
}

RankPerturbation perturb_ranks(const DensityMatrix& delta, std::pair<int, int> target, double eta,
                               const OptimizerConfig& cfg) {
  const BipartiteDims& dims = delta.dims();
  if (eta < 0.0) throw ValidationError("perturb_ranks: eta must be non-negative");
  const int r0 = spectral(delta.matrix()).rank;
  const int s0 = spectral(partial_transpose(delta)).rank;
  if (dims.m != 3 || dims.n != 3) throw ValidationError("perturb_ranks applies to 3 x 3 states");
  if (r0 + s0 > 13) throw ValidationError("perturb_ranks: rank sum above 13");
  RankPerturbation out{delta, r0, s0, 0.0, 0, 0.0, target == std::make_pair(r0, s0)};
  if (eta == 0.0) return out;
  if (!is_ppt(delta, 1e-9).ppt) throw ValidationError("perturb_ranks: state is not PPT");

  // each generic product raises both ranks by one, the subtraction lowers one of them
  const int add = std::max(1, (target.first + target.second - r0 - s0 + 2) / 2);
  Rng rng = restart_rng(cfg.seed ^ 0x9e7ULL, 0);
  Matrix mixed = delta.matrix();
  std::vector<Vector> used;
  for (int i = 0; i < add; ++i) {
    const PureState prod = random_product_state(dims, rng);
    used.push_back(prod.amplitudes());
    mixed += eta * prod.projector();
  }
  mixed /= mixed.trace().real();

  const SpectralData sd = spectral(mixed);
  const SpectralData pt = spectral(hermitian_part(partial_transpose(mixed, dims, Side::A)));
  OptimizerConfig search_cfg = cfg;
  search_cfg.restarts = std::max(cfg.restarts, 200);
  const auto search = rankopt::find_ppt_product_vector(sd.range_basis, pt.range_basis, dims, search_cfg);
  std::optional<rankopt::ProductVector> chosen;
  for (const auto& c : search.candidates) {
    bool fresh = true;
    for (const Vector& u : used)
      if (std::abs(u.dot(c.state.amplitudes())) > 1.0 - 1e-6) fresh = false;
    if (fresh) {
      chosen = c;
      break;
    }
  }
  if (!chosen)
    throw CertificationError("perturb_ranks: no PPT-compatible product vector outside the added mixture",
                             search.best_residual);
  const Vector partner = kron(Vector(chosen->e.conjugate()), chosen->f);
  const double lambda =
      std::min(inverse_bound(sd, chosen->state.amplitudes()), inverse_bound(pt, partner));
  Matrix result = hermitian_part(mixed - lambda * chosen->state.projector());
  result /= result.trace().real();
  DensityMatrix state = DensityMatrix::from_operator(result, dims);
  if (!is_ppt(state, 1e-9).ppt) throw NumericalError("perturb_ranks: result is not PPT");
  out.state = state;
  out.rank = spectral(state.matrix()).rank;
  out.pt_rank = spectral(partial_transpose(state)).rank;
  out.distance = max_abs(state.matrix() - delta.matrix());
  out.added = add;
  out.subtracted_lambda = lambda;
  out.reached_target = out.rank == target.first && out.pt_rank == target.second;
  return out;
}

}  // namespace qsw::edge
