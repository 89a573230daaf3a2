#pragma once

// Schmidt-number classification and the catalog-wide evidence scan.

#include <string>
#include <vector>

#include "qsw/io.hpp"

namespace qsw::report {

using rankopt::OptimizerConfig;
using io::json;

struct ClassifyOptions {
  int k_max = 0;  // 0 means m
  /// A witness counts as violated when Tr(W rho) < -detect_tol.
  double detect_tol = 1e-9;
};

/// Interval [lower, upper] on the Schmidt number, each end backed by a certificate.
struct SchmidtNumberBounds {
  int lower = 1;
  int upper = 1;
  json lower_certificate;
  json upper_certificate;
  json attempts = json::array();
  std::vector<std::string> warnings;
};

/// Lower bounds, in order: PT spectrum, fidelity witnesses s_{k-1}(phi) 1 - |phi><phi| for
/// phi = Psi+ and the leading eigenvectors, the catalog witnesses on 3 x 3, edge witnesses built
/// from edge extractions.
/// Upper bounds: Schmidt rank for pure states, the rank-4 construction on 3 x 3 PPT states,
/// then greedy decompositions into vectors of rank < k for increasing k.
SchmidtNumberBounds classify(const DensityMatrix& rho, const OptimizerConfig& cfg, const ClassifyOptions& opts = {});

json to_json(const SchmidtNumberBounds& b, const DensityMatrix& rho, const OptimizerConfig& cfg);

struct ScanRow {
  std::string family;
  json parameters;
  int state_rank = 0;
  int state_pt_rank = 0;
  bool edge_extracted = false;
  int edge_rank = 0;
  int edge_pt_rank = 0;
  int l_count = 0;
  bool admissible = false;
  bool psi2_found = false;
  double psi2_value = 0.0;
  bool schmidt2_certificate = false;
  bool rank4_applies = false;
  bool witness_detects = false;
  double witness_value = 0.0;
  std::vector<std::string> errors;
};

/// Runs every PPT-entangled catalog family (default parameters) through edge extraction,
/// the rank-pair bookkeeping, the Schmidt-rank-2 search and, for rank 4, the explicit
/// Schmidt-number-2 decomposition.
std::vector<ScanRow> conjecture_scan(const OptimizerConfig& cfg);

json to_json(const std::vector<ScanRow>& rows, const OptimizerConfig& cfg);

}  // namespace qsw::report
