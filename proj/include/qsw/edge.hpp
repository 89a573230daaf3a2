#pragma once

// Edge states: pure-state subtraction, k-edge tests, greedy edge decomposition,
// the rank-4 Schmidt-number-2 construction and the rank-pair search tools for
// 3 x 3 PPT edge states.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsw/rankopt.hpp"

namespace qsw::edge {

using rankopt::OptimizerConfig;

struct Subtraction {
  double lambda = 0.0;
  PositiveOperator remainder;
  int rank_before = 0;
  int rank_after = 0;
  /// ||(1 - Pi_range) psi|| of the subtracted vector.
  double range_residual = 0.0;
};

/// Largest lambda with rho - lambda |psi><psi| >= 0, namely 1 / <psi|rho^+|psi>.
/// Throws ValidationError if psi is not in the range (residual > 1e-7) and
/// NumericalError if lambda < 1e-12 or the remainder has an eigenvalue below -1e-9.
Subtraction subtract_pure(const PositiveOperator& rho, const PureState& psi);

struct EdgeTest {
  bool is_edge = false;
  std::optional<PureState> witness_vector;
  double best_tail = 0.0;
  int restarts = 0;
};

/// True iff no vector of Schmidt rank < k is found in the range.
EdgeTest is_edge_state(const PositiveOperator& delta, int k, const OptimizerConfig& cfg);

struct Component {
  double weight = 0.0;
  PureState state;
  int schmidt_rank = 0;
};

struct EdgeDecomposition {
  /// Trace of the remainder, an upper bound on the minimal edge weight.
  double p = 1.0;
  std::vector<Component> components;
  PositiveOperator delta;
  int k = 2;
  bool fully_decomposed = false;
  bool preserve_ppt = false;
  double reconstruction_error = 0.0;
  int steps = 0;
};

struct DecomposeOptions {
  /// Subtract only product vectors e (x) f whose partner conj(e) (x) f lies in the range
  /// of the partial transpose, with lambda bounded by both operators, so every
  /// intermediate operator stays PPT (k = 2 only).
  bool preserve_ppt = false;
  int max_steps = 256;
};

/// Greedy decomposition: subtract the rank-(k-1) vector with the largest admissible
/// lambda among the candidates of each search batch until the range holds none.
EdgeDecomposition edge_decompose(const DensityMatrix& rho, int k, const OptimizerConfig& cfg,
                                 const DecomposeOptions& opts = {});
EdgeDecomposition edge_decompose(const PositiveOperator& rho, int k, const OptimizerConfig& cfg,
                                 const DecomposeOptions& opts = {});

/// Edge state of a PPT state in the normalized form used by the rank tools.
DensityMatrix ppt_edge_state(const DensityMatrix& rho, const OptimizerConfig& cfg);

struct Schmidt2Telemetry {
  Vector kernel_a;  // e1
  Vector kernel_b;  // f
  double kernel_residual = 0.0;
  Matrix a_basis;  // columns e1, e2, e3
  double first_lambda = 0.0;
  double second_lambda = 0.0;
  int rank_after_first = 0;
  int rank_after_second = 0;
  double min_eigenvalue_after_first = 0.0;
  double min_eigenvalue_after_second = 0.0;
  int kernel_search_restarts = 0;
};

struct Schmidt2Certificate {
  /// Weighted unit vectors; the first two come from the two subtractions, the rest
  /// from the eigendecomposition of the final remainder.
  std::vector<std::pair<double, PureState>> components;
  double reconstruction_error = 0.0;
  Schmidt2Telemetry telemetry;
};

/// Schmidt-number-2 decomposition of a rank-4 PPT state on 3 x 3.
/// Throws ValidationError on wrong shape, rank or a non-PPT input,
/// CertificationError if no product vector is found in the kernel and
/// NumericalError if an intermediate operator fails its positivity check at 1e-9.
Schmidt2Certificate rank4_schmidt2(const DensityMatrix& delta, const OptimizerConfig& cfg);

inline const std::vector<std::pair<int, int>>& admissible_rank_pairs() {
  static const std::vector<std::pair<int, int>> pairs = {{5, 7}, {5, 8}, {6, 6}, {6, 7}, {7, 6}, {8, 5}};
  return pairs;
}

struct Rank2Candidate {
  PureState psi;
  Vector e1, f1, e2, f2;
  cplx beta;
  /// <psi|P + Q^T_A|psi> / <psi|psi>.
  double value = 0.0;
  /// ||P psi|| / ||psi||, ||Q |conj(e1), f1>||, ||Q |conj(e2), f2>||.
  double residual_p = 0.0;
  double residual_q1 = 0.0;
  double residual_q2 = 0.0;
  int schmidt_rank = 0;
  int restart = 0;
};

struct Rank2Search {
  int rank = 0;
  int pt_rank = 0;
  bool admissible = false;
  /// 27 - r - 2 r_pt.
  int l_count = 0;
  std::optional<Rank2Candidate> found;
  double best_value = 0.0;
  double best_residual = 0.0;
  int restarts = 0;
};

inline constexpr double kRank2ValueTol = 1e-8;
inline constexpr double kRank2ResidualTol = 1e-6;

/// Searches |psi> = |e1 f1> + beta |e2 f2> in the range of delta with conj(e_i) (x) f_i in the
/// range of delta^T_A and negative expectation of W = P + Q^T_A, where P and Q project
/// onto the kernels of delta and delta^T_A. The first restart (by index) meeting both
/// tolerances is returned.
Rank2Search rank2_violation_search(const DensityMatrix& delta, const OptimizerConfig& cfg);

struct RankPerturbation {
  DensityMatrix state;
  int rank = 0;
  int pt_rank = 0;
  double distance = 0.0;  // max-abs entry difference to the input
  int added = 0;          // product projectors mixed in
  double subtracted_lambda = 0.0;
  bool reached_target = false;
};

/// Mixes eta-weighted random product projectors into delta (generically each raises both
/// ranks by one), then subtracts a PPT-compatible product vector not used in the mixture. The number of
/// added projectors is chosen from the requested rank pair. eta = 0 returns delta.
RankPerturbation perturb_ranks(const DensityMatrix& delta, std::pair<int, int> target, double eta,
                               const OptimizerConfig& cfg);

}  // namespace qsw::edge
