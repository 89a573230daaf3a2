#pragma once

// Internals shared by the optimization translation units.

#include <vector>

#include "qsw/random.hpp"
#include "qsw/rankopt.hpp"

namespace qsw::rankopt::detail {

struct SeesawOutcome {
  double value;
  Vector psi;
  int iterations;
  bool converged;
};

struct SeesawOptions {
  int max_iters = 500;
  double value_tol = 1e-10;
  /// When positive, convergence also requires the iterate to move less than this.
  double vector_tol = 0.0;
};

SeesawOutcome seesaw_run(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode, const SeesawOptions& opts,
                         Rng& rng);

/// cfg.restarts see-saw runs; restart i draws from restart_rng(cfg.seed, first_restart + i).
std::vector<SeesawOutcome> seesaw_restarts(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode,
                                           const OptimizerConfig& cfg, int first_restart, double vector_tol = 0.0);

/// Complex residual with derivatives in z (holo) and in conj(z) (anti, may be empty).
struct Linearization {
  Vector residual;
  Matrix holo;
  Matrix anti;
};

/// Minimum-norm Gauss-Newton step over the real and imaginary parts of z.
Vector gauss_newton_step(const Linearization& lin);

/// Drives ||complement^dagger sum_i left_i (x) right_i|| / ||psi|| toward zero.
/// Returns the final relative residual; left/right are updated in place.
double polish_rank_r(const Matrix& complement, const BipartiteDims& dims, Matrix& left, Matrix& right, int max_steps);

/// Same for the pair condition e (x) f in range, conj(e) (x) f in the PT range.
double polish_ppt_product(const Matrix& complement, const Matrix& pt_complement, const BipartiteDims& dims, Vector& e,
                          Vector& f, int max_steps);

bool is_duplicate(const Vector& psi, const std::vector<Vector>& seen, double overlap_tol);

bool improves(double candidate, double incumbent, Extremum mode);

}  // namespace qsw::rankopt::detail
