#pragma once

// Tangent sets and witness optimization by subtraction of positive operators.

#include <vector>

#include "qsw/witness.hpp"

namespace qsw::rankopt {

struct TangentSet {
  /// Distinct rank-(k-1) unit vectors with |<psi|W|psi>| <= 1e-6.
  std::vector<PureState> vectors;
  /// Numerical rank of the stacked vectors: singular values above
  /// max(1e-6, 1e-3 * largest singular value).
  int span_dim = 0;
  /// Orthonormal basis of the orthogonal complement of the span.
  Matrix complement_basis;
  /// Span of the tangent vectors together with the directions in which the second
  /// variation of <psi|W|psi> over rank-(k-1) vectors vanishes at each of them.
  int extended_span_dim = 0;
  Matrix extended_complement_basis;
  int restarts_used = 0;
};

/// Collects tangent vectors of a class-k witness until 3 * dim distinct ones are
/// found or the restart budget (8 * 3 * dim, at least cfg.restarts) runs out.
TangentSet tangent_set(const witness::Witness& w, const OptimizerConfig& cfg);
TangentSet tangent_set(const Matrix& w, const BipartiteDims& dims, int k, const OptimizerConfig& cfg);

/// Multistart estimate of inf over e1, e2 of the smallest eigenvalue of
/// P_{e1e2}^{-1/2} W_{e1e2} P_{e1e2}^{-1/2}, where X_{e1e2} is the 2x2 block
/// compression of X onto span{e1, e2} (x) C^n. A positive value means some
/// multiple of P can be subtracted from W without losing the class-2 property.
struct BlockCheck {
  double estimate = 0.0;
  bool admissible = false;
  int samples = 0;
};
BlockCheck block_compression_check(const Matrix& w, const Matrix& p, const BipartiteDims& dims,
                                   const OptimizerConfig& cfg);

struct OptimizationRound {
  int span_dim = 0;
  /// Rank of the subtracted projector: complement of the tangent span, or of the
  /// extended span when that removes more (larger lambda * rank).
  int projector_rank = 0;
  bool used_extended = false;
  double lambda = 0.0;
  BlockCheck block;  // evaluated for k = 2 only (samples == 0 otherwise)
};

struct OptimizedWitness {
  witness::Witness witness;
  bool optimal = false;  // final tangent set spans the whole space
  int final_span_dim = 0;
  std::vector<OptimizationRound> rounds;
};

inline constexpr int kMaxSubtractionRounds = 8;
inline constexpr double kBisectionTol = 1e-6;

/// Repeatedly subtracts lambda * P, with P a projector annihilating the tangent set and
/// lambda the largest value (bisection to 1e-6) that keeps the class-k certificate.
/// Stops when the tangent span is full, when no positive lambda is found, or after 8 rounds.
/// Throws CertificationError if the input itself fails certification.
OptimizedWitness optimize_witness(const witness::Witness& w, const OptimizerConfig& cfg);

}  // namespace qsw::rankopt
