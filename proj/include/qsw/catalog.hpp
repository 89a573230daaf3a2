#pragma once

// Named 3 x 3 state families used as test fodder and as evidence for the rank tools.
//
// Families and parameter ranges:
//   isotropic(m, p)       p |Psi+><Psi+| + (1 - p) 1/m^2, 0 <= p <= 1
//   upb_tiles             (1 - sum_i |u_i><u_i|) / 4 over the five tiles vectors
//                           |0>(|0>-|1>)/sqrt2, (|0>-|1>)|2>/sqrt2, |2>(|1>-|2>)/sqrt2,
//                           (|1>-|2>)|0>/sqrt2, (|0>+|1>+|2>)(|0>+|1>+|2>)/3
//   horodecki_alpha(a)    2/7 |Psi+><Psi+| + a/7 s+ + (5-a)/7 s-, 2 <= a <= 5, with s+ the
//                           uniform mixture of |01>,|12>,|20> and s- of |10>,|21>,|02>
//   chessboard(a,b,c,d,m,n)  normalized sum of |V_i><V_i| with amplitude matrices
//                           V1 = (m 0 s; 0 n 0; 0 0 0), V2 = (0 a 0; b 0 c; 0 0 0),
//                           V3 = (n 0 0; 0 -m 0; t 0 0), V4 = (0 b 0; -a 0 0; 0 d 0),
//                           s = a c / n, t = a d / m; m, n nonzero
//   choi(a, b, c)         all-ones block on |00>,|11>,|22>, diagonal a, b, c on |01>,|12>,|20>
//                           and 1/a, 1/b, 1/c on |10>,|21>,|02>, normalized; a, b, c > 0
//   horodecki_1997(a)     the 3 x 3 family normalized by 8a + 1, 0 < a < 1

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsw/bilin.hpp"

namespace qsw::catalog {

struct Parameter {
  std::string name;
  double value = 0.0;
};

struct Expected {
  std::optional<bool> ppt;
  std::optional<int> rank;
  std::optional<int> pt_rank;
  /// Entangled states carry a witness check in the test suite.
  std::optional<bool> entangled;
  /// No product vector in the range.
  std::optional<bool> range_product_free;
  std::string note;
};

struct CatalogEntry {
  std::string name;
  std::vector<Parameter> parameters;
  DensityMatrix state;
  Expected expected;
  /// Irregularities found while building, e.g. "rank 3, expected 4".
  std::vector<std::string> flags;
};

DensityMatrix isotropic_state(int m, double p);
CatalogEntry isotropic_entry(int m, double p);
CatalogEntry upb_tiles_state();
CatalogEntry horodecki_alpha_state(double alpha);
/// params = {a, b, c, d, m, n}
CatalogEntry chessboard_state(const std::vector<double>& params);
CatalogEntry choi_state(double a, double b, double c);
CatalogEntry horodecki_1997_state(double a);

/// Five unit vectors of the tiles basis.
std::vector<Vector> tiles_vectors();

/// sum_ij |i><j| (x) Phi(|i><j|) for the generalized Choi map on 3 x 3,
///   Phi(X) = diag(a x00 + b x11 + c x22, c x00 + a x11 + b x22, b x00 + c x11 + a x22) - X.
/// Phi is positive for a >= 1, a + b + c >= 3 and, when a <= 2, bc >= (2 - a)^2; other
/// parameters throw ValidationError. (2, 0, 1) is the original Choi map.
Matrix choi_map_witness(double a, double b, double c);

struct NamedWitness {
  std::string name;
  std::vector<Parameter> parameters;
  Matrix matrix;  // class-2 witness on 3 x 3
};

/// Entanglement witnesses shipped with the catalog: the Choi map (2, 0, 1) and its
/// mirror (2, 1, 0). The mirror detects horodecki_alpha exactly for alpha > 3.
const std::vector<NamedWitness>& witnesses();

struct Family {
  std::string name;
  std::string summary;
  std::vector<Parameter> defaults;
  bool ppt_entangled = false;  // at the default parameters
};

const std::vector<Family>& families();

/// Builds a family member; parameters missing from `overrides` take their defaults.
/// Throws ValidationError on an unknown family or parameter name.
CatalogEntry make(const std::string& name, const std::map<std::string, double>& overrides = {});

}  // namespace qsw::catalog
