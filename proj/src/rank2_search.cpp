#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "qsw/edge.hpp"
#include "qsw/parallel.hpp"
#include "qsw/random.hpp"

namespace qsw::edge {

namespace {

constexpr int kParams = 26;
constexpr double kMargin = 1e-3;

struct Unpacked {
  Vector e1, f1, e2, f2;
  cplx beta;
};

Vector unit_from(const Eigen::VectorXd& x, int offset) {
  Vector v(3);
  for (int i = 0; i < 3; ++i) v(i) = cplx(x(offset + 2 * i), x(offset + 2 * i + 1));
  const double nrm = v.norm();
  return nrm > 0.0 ? Vector(v / nrm) : v;
}

Unpacked unpack(const Eigen::VectorXd& x) {
  return {unit_from(x, 0), unit_from(x, 6), unit_from(x, 12), unit_from(x, 18), cplx(x(24), x(25))};
}

struct Problem {
  Matrix kernel;     // basis of ker(delta)
  Matrix pt_kernel;  // basis of ker(delta^T_A)
  Matrix w;          // P + Q^T_A

  Vector combined(const Unpacked& u) const { return kron(u.e1, u.f1) + u.beta * kron(u.e2, u.f2); }
  Vector partner(const Vector& e, const Vector& f) const { return kron(Vector(e.conjugate()), f); }
  double rayleigh(const Vector& psi) const { return psi.dot(w * psi).real() / psi.squaredNorm(); }
};

struct Residual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Problem* prob;
  int count;

  int inputs() const { return kParams; }
  int values() const { return count; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    const Unpacked u = unpack(x);
    const Vector psi = prob->combined(u);
    const double nrm = std::max(psi.norm(), 1e-12);
    out.setZero(count);
    int at = 0;
    auto put = [&](const Vector& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(at++) = v(i).real();
        out(at++) = v(i).imag();
      }
    };
    put(prob->kernel.adjoint() * psi / nrm);
    put(prob->pt_kernel.adjoint() * prob->partner(u.e1, u.f1));
    put(prob->pt_kernel.adjoint() * prob->partner(u.e2, u.f2));
    out(at) = std::max(0.0, prob->rayleigh(psi) + kMargin);
    return 0;
  }
};

Rank2Candidate evaluate(const Problem& prob, const Eigen::VectorXd& x, int restart, const BipartiteDims& dims) {
  const Unpacked u = unpack(x);
  const Vector psi = prob.combined(u);
  Rank2Candidate c{PureState::normalized(psi, dims), u.e1, u.f1, u.e2, u.f2, u.beta};
  c.value = prob.rayleigh(psi);
  c.residual_p = (prob.kernel.adjoint() * psi).norm() / psi.norm();
  c.residual_q1 = (prob.pt_kernel.adjoint() * prob.partner(u.e1, u.f1)).norm();
  c.residual_q2 = (prob.pt_kernel.adjoint() * prob.partner(u.e2, u.f2)).norm();
  c.schmidt_rank = schmidt_rank(psi, dims);
  c.restart = restart;
  return c;
}

double worst_residual(const Rank2Candidate& c) { return std::max({c.residual_p, c.residual_q1, c.residual_q2}); }

}  // namespace

Rank2Search rank2_violation_search(const DensityMatrix& delta, const OptimizerConfig& cfg) {
  cfg.validate();
  const BipartiteDims& dims = delta.dims();
  if (dims.m != 3 || dims.n != 3) throw ValidationError("rank2_violation_search applies to 3 x 3 states");
  if (!is_ppt(delta, 1e-9).ppt) throw ValidationError("rank2_violation_search: state is not PPT");
  const SpectralData sd = spectral(delta.matrix());
  const SpectralData pt = spectral(partial_transpose(delta));

  Rank2Search res;
  res.rank = sd.rank;
  res.pt_rank = pt.rank;
  res.l_count = 27 - sd.rank - 2 * pt.rank;
  const auto& pairs = admissible_rank_pairs();
  res.admissible = std::find(pairs.begin(), pairs.end(), std::make_pair(sd.rank, pt.rank)) != pairs.end();
  res.restarts = cfg.restarts;

  Problem prob{sd.kernel_basis, pt.kernel_basis,
               sd.kernel_projector() + partial_transpose(pt.kernel_projector(), dims, Side::A)};
  const int count =
      std::max<int>(kParams, 2 * (sd.kernel_basis.cols() + 2 * pt.kernel_basis.cols()) + 1);

  const auto runs = parallel_map(cfg.restarts, [&](int i) {
    Rng rng = restart_rng(cfg.seed ^ 0x4c4d4cULL, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x(kParams);
    for (int j = 0; j < kParams; ++j) x(j) = gauss(rng);
    Residual fn{&prob, count};
    Eigen::NumericalDiff<Residual> diff(fn);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residual>> lm(diff);
    lm.parameters.maxfev = cfg.max_iters * kParams;
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.minimize(x);
    return evaluate(prob, x, i, dims);
  });

  res.best_value = runs.front().value;
  res.best_residual = worst_residual(runs.front());
  for (const auto& c : runs) {
    res.best_value = std::min(res.best_value, c.value);
    res.best_residual = std::min(res.best_residual, worst_residual(c));
    if (!res.found && c.value <= -kRank2ValueTol && worst_residual(c) <= kRank2ResidualTol) res.found = c;
  }
  return res;
}

}  // namespace qsw::edge
