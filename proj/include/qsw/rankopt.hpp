#pragma once

// Schmidt-rank-constrained optimization: extremal expectation values over pure
// states of bounded Schmidt rank, and searches for bounded-rank vectors inside a
// subspace.

#include <cstdint>
#include <optional>
#include <vector>

#include "qsw/bilin.hpp"

namespace qsw::rankopt {

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 500;
  double convergence_tol = 1e-10;
  std::uint64_t seed = 20010101;

  /// Throws ValidationError on restarts < 1 or convergence_tol <= 0.
  void validate() const;
};

enum class Extremum { Min, Max };

struct RankOptResult {
  double value = 0.0;
  PureState argvector;
  int schmidt_rank_used = 0;
  bool converged = false;
  std::vector<double> restart_values;
  int best_restart = 0;
  /// Distance between the best and second-best restart values (0 for a single restart).
  double gap = 0.0;
  int iterations = 0;
};

/// Min or max of <psi|a|psi> over unit vectors of Schmidt rank <= r.
///
/// Multistart see-saw: for a fixed r-dimensional subspace E of the A factor the
/// optimum over E (x) C^n is an eigenvector of the compressed operator; the
/// iterate's right Schmidt span then fixes a subspace F of the B factor and the
/// same step runs on C^m (x) F. Each half-step is a global eigenproblem, so the
/// value is monotone. For r >= m the exact extremal eigenpair is returned.
/// Restarts may run in parallel; the reduction picks the best value with ties
/// broken by restart index.
RankOptResult extremal_overlap(const Matrix& a, const BipartiteDims& dims, int r, Extremum mode,
                               const OptimizerConfig& cfg);

struct ProductVector {
  Vector e;  // unit, A factor
  Vector f;  // unit, B factor
  PureState state;
  double residual = 0.0;
};

struct ProductSearch {
  std::optional<ProductVector> found;
  /// Distinct qualifying vectors in restart order.
  std::vector<ProductVector> candidates;
  /// Smallest residual reached over all restarts.
  double best_residual = 0.0;
  /// True when the search floor stayed above 1e-4.
  bool stalled = false;
  int restarts = 0;
};

/// Product vector e (x) f inside span(subspace_basis) with ||(1 - Pi) ef|| <= 1e-7.
ProductSearch find_product_vector(const Matrix& subspace_basis, const BipartiteDims& dims, const OptimizerConfig& cfg);

struct RankVectorSearch {
  std::optional<PureState> found;
  std::vector<PureState> candidates;
  /// Smallest relative Schmidt tail sum_{i>r} a_i^2 over the projected restart results.
  double best_tail = 1.0;
  int restarts = 0;
};

/// Unit vector inside span(subspace_basis) whose Schmidt tail beyond r is <= 1e-10.
///
/// Searches rank-r vectors closest to the subspace, polishes the factors by
/// Gauss-Newton and projects into the subspace; the projected tail is reported.
RankVectorSearch find_rank_r_vector(const Matrix& subspace_basis, const BipartiteDims& dims, int r,
                                    const OptimizerConfig& cfg);

/// Product vectors e (x) f in span(range_basis) with conj(e) (x) f in span(pt_range_basis).
/// These are the vectors whose projector can be subtracted from a PPT state while
/// keeping both the operator and its partial transpose positive.
ProductSearch find_ppt_product_vector(const Matrix& range_basis, const Matrix& pt_range_basis,
                                      const BipartiteDims& dims, const OptimizerConfig& cfg);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
Matrix orthogonal_complement(const Matrix& basis, int dim);

}  // namespace qsw::rankopt
