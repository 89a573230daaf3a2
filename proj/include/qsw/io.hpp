#pragma once

// JSON interchange for matrices, states, witnesses and certificates.
//
// Matrix block: {"dims": [m, n], "re": [[...]], "im": [[...]]}, row-major with composite
// index a*n + b. Pure states use flat "re"/"im" arrays. Inputs with m > n are accepted and
// rebuilt on the exchanged tensor order.

#include <string>

#include <json.hpp>

#include "qsw/catalog.hpp"
#include "qsw/edge.hpp"
#include "qsw/optimize.hpp"
#include "qsw/witness.hpp"

namespace qsw::io {

using json = nlohmann::ordered_json;

json to_json(const Matrix& op, const BipartiteDims& dims);
json to_json(const Vector& v, const BipartiteDims& dims);
json to_json(const DensityMatrix& rho);
json to_json(const PureState& psi);
json to_json(const witness::Witness& w);
json to_json(const rankopt::OptimizerConfig& cfg);
json to_json(const edge::EdgeDecomposition& dec);
json to_json(const edge::Schmidt2Certificate& cert);
json to_json(const edge::Rank2Search& res);
json to_json(const catalog::CatalogEntry& entry);
json to_json(const rankopt::TangentSet& tangent);
json to_json(const rankopt::OptimizedWitness& opt);

/// Reads a matrix block; `dims` receives the (ordered) dimensions.
Matrix matrix_from_json(const json& j, BipartiteDims& dims);
/// Accepts a matrix block or a pure-state block.
DensityMatrix state_from_json(const json& j);
witness::Witness witness_from_json(const json& j);

/// Throws ValidationError on unreadable files or malformed JSON.
json read_file(const std::string& path);
/// Writes to `path`, or to stdout when `path` is empty or "-".
void write_output(const json& j, const std::string& path);

}  // namespace qsw::io
