#include "qsw/io.hpp"

#include <fstream>
#include <iostream>

namespace qsw::io {

namespace {

json real_rows(const Matrix& op, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < op.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < op.cols(); ++j) row.push_back(imag ? op(i, j).imag() : op(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json dims_json(const BipartiteDims& dims) { return json::array({dims.m, dims.n}); }

BipartiteDims read_dims(const json& j, int& raw_a, int& raw_b) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 2)
    throw ValidationError("expected \"dims\": [m, n]");
  raw_a = j["dims"][0].get<int>();
  raw_b = j["dims"][1].get<int>();
  return BipartiteDims::ordered(raw_a, raw_b);
}

double number(const json& x) {
  if (!x.is_number()) throw ValidationError("matrix entries must be numbers");
  return x.get<double>();
}

json spectrum_summary(const Matrix& op) {
  const SpectralData sd = spectral(op);
  return {{"rank", sd.rank}, {"min_eigenvalue", sd.min_eigenvalue()}, {"max_eigenvalue", sd.max_eigenvalue()}};
}

}  // namespace

json to_json(const Matrix& op, const BipartiteDims& dims) {
  return {{"dims", dims_json(dims)}, {"re", real_rows(op, false)}, {"im", real_rows(op, true)}};
}

json to_json(const Vector& v, const BipartiteDims& dims) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"dims", dims_json(dims)}, {"re", re}, {"im", im}};
}

json to_json(const DensityMatrix& rho) { return to_json(rho.matrix(), rho.dims()); }
json to_json(const PureState& psi) { return to_json(psi.amplitudes(), psi.dims()); }

json to_json(const witness::Witness& w) {
  json j = to_json(w.matrix(), w.dims());
  j["k"] = w.k();
  j["provenance"] = witness::to_string(w.provenance());
  const auto& c = w.certification();
  j["certification"] = {{"min_value", c.min_value}, {"restarts", c.restarts}, {"seed", c.seed},
                        {"tolerance", c.tolerance}, {"gap", c.gap}};
  return j;
}

json to_json(const rankopt::OptimizerConfig& cfg) {
  return {{"restarts", cfg.restarts}, {"max_iters", cfg.max_iters}, {"convergence_tol", cfg.convergence_tol},
          {"seed", cfg.seed}};
}

json to_json(const edge::EdgeDecomposition& dec) {
  json comps = json::array();
  for (const auto& c : dec.components)
    comps.push_back({{"weight", c.weight}, {"schmidt_rank", c.schmidt_rank}, {"state", to_json(c.state)}});
  return {{"k", dec.k},
          {"p", dec.p},
          {"fully_decomposed", dec.fully_decomposed},
          {"preserve_ppt", dec.preserve_ppt},
          {"steps", dec.steps},
          {"reconstruction_error", dec.reconstruction_error},
          {"components", comps},
          {"remainder", to_json(dec.delta.matrix(), dec.delta.dims())},
          {"remainder_spectrum", spectrum_summary(dec.delta.matrix())}};
}

json to_json(const edge::Schmidt2Certificate& cert) {
  json comps = json::array();
  for (const auto& [w, psi] : cert.components)
    comps.push_back({{"weight", w},
                     {"schmidt_rank", schmidt_rank(psi.amplitudes(), psi.dims())},
                     {"state", to_json(psi)}});
  const auto& t = cert.telemetry;
  const BipartiteDims one(1, 3);
  json tel = {{"kernel_product_a", to_json(t.kernel_a, one)},
              {"kernel_product_b", to_json(t.kernel_b, one)},
              {"kernel_residual", t.kernel_residual},
              {"kernel_search_restarts", t.kernel_search_restarts},
              {"first_lambda", t.first_lambda},
              {"second_lambda", t.second_lambda},
              {"rank_after_first", t.rank_after_first},
              {"rank_after_second", t.rank_after_second},
              {"min_eigenvalue_after_first", t.min_eigenvalue_after_first},
              {"min_eigenvalue_after_second", t.min_eigenvalue_after_second}};
  return {{"components", comps}, {"reconstruction_error", cert.reconstruction_error}, {"telemetry", tel}};
}

json to_json(const edge::Rank2Search& res) {
  json j = {{"rank", res.rank},         {"pt_rank", res.pt_rank},         {"admissible", res.admissible},
            {"l_count", res.l_count},   {"found", res.found.has_value()}, {"best_value", res.best_value},
            {"best_residual", res.best_residual}, {"restarts", res.restarts}};
  if (res.found) {
    const auto& c = *res.found;
    j["candidate"] = {{"state", to_json(c.psi)},
                      {"beta", {c.beta.real(), c.beta.imag()}},
                      {"value", c.value},
                      {"residual_p", c.residual_p},
                      {"residual_q1", c.residual_q1},
                      {"residual_q2", c.residual_q2},
                      {"schmidt_rank", c.schmidt_rank},
                      {"restart", c.restart}};
  }
  return j;
}

json to_json(const catalog::CatalogEntry& entry) {
  json params = json::object();
  for (const auto& p : entry.parameters) params[p.name] = p.value;
  json expected = json::object();
  const auto& ex = entry.expected;
  if (ex.ppt) expected["ppt"] = *ex.ppt;
  if (ex.rank) expected["rank"] = *ex.rank;
  if (ex.pt_rank) expected["pt_rank"] = *ex.pt_rank;
  if (ex.entangled) expected["entangled"] = *ex.entangled;
  if (ex.range_product_free) expected["range_product_free"] = *ex.range_product_free;
  expected["note"] = ex.note;
  json j = to_json(entry.state);
  j["name"] = entry.name;
  j["parameters"] = params;
  j["expected"] = expected;
  j["flags"] = entry.flags;
  return j;
}

json to_json(const rankopt::TangentSet& tangent) {
  return {{"vectors", tangent.vectors.size()},
          {"span_dim", tangent.span_dim},
          {"extended_span_dim", tangent.extended_span_dim},
          {"restarts_used", tangent.restarts_used}};
}

json to_json(const rankopt::OptimizedWitness& opt) {
  json rounds = json::array();
  for (const auto& r : opt.rounds)
    rounds.push_back({{"span_dim", r.span_dim},
                      {"projector_rank", r.projector_rank},
                      {"used_extended", r.used_extended},
                      {"lambda", r.lambda},
                      {"block_estimate", r.block.estimate},
                      {"block_samples", r.block.samples}});
  return {{"optimal", opt.optimal},
          {"final_span_dim", opt.final_span_dim},
          {"rounds", rounds},
          {"witness", to_json(opt.witness)}};
}

Matrix matrix_from_json(const json& j, BipartiteDims& dims) {
  int a = 0, b = 0;
  dims = read_dims(j, a, b);
  const int d = a * b;
  if (!j.contains("re") || !j["re"].is_array() || j["re"].size() != static_cast<std::size_t>(d))
    throw ValidationError("\"re\" must be a " + std::to_string(d) + " x " + std::to_string(d) + " array");
  const bool has_im = j.contains("im");
  if (has_im && (!j["im"].is_array() || j["im"].size() != static_cast<std::size_t>(d)))
    throw ValidationError("\"im\" must match \"re\"");
  Matrix op(d, d);
  for (int r = 0; r < d; ++r) {
    const json& row = j["re"][r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d))
      throw ValidationError("row " + std::to_string(r) + " of \"re\" has the wrong length");
    for (int c = 0; c < d; ++c) {
      double im = 0.0;
      if (has_im) {
        const json& irow = j["im"][r];
        if (!irow.is_array() || irow.size() != static_cast<std::size_t>(d))
          throw ValidationError("row " + std::to_string(r) + " of \"im\" has the wrong length");
        im = number(irow[c]);
      }
      op(r, c) = cplx(number(row[c]), im);
    }
  }
  if (dims.swapped) op = swap_subsystems(op, a, b);
  return op;
}

DensityMatrix state_from_json(const json& j) {
  try {
    if (j.contains("re") && j["re"].is_array() && !j["re"].empty() && j["re"][0].is_number()) {
      int a = 0, b = 0;
      const BipartiteDims dims = read_dims(j, a, b);
      const int d = a * b;
      if (j["re"].size() != static_cast<std::size_t>(d)) throw ValidationError("pure state has the wrong length");
      Vector v(d);
      for (int i = 0; i < d; ++i)
        v(i) = cplx(number(j["re"][i]), j.contains("im") ? number(j["im"].at(i)) : 0.0);
      if (dims.swapped) v = swap_subsystems(v, a, b);
      return DensityMatrix::from_pure(PureState::normalized(v, dims));
    }
    BipartiteDims dims;
    const Matrix op = matrix_from_json(j, dims);
    return DensityMatrix(op, dims);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed state JSON: ") + e.what());
  }
}

witness::Witness witness_from_json(const json& j) {
  try {
    BipartiteDims dims;
    const Matrix op = matrix_from_json(j, dims);
    if (!j.contains("k")) throw ValidationError("witness JSON needs \"k\"");
    witness::Certification cert;
    if (j.contains("certification")) {
      const json& c = j["certification"];
      cert.min_value = c.value("min_value", 0.0);
      cert.restarts = c.value("restarts", 0);
      cert.seed = c.value("seed", std::uint64_t{0});
      cert.tolerance = c.value("tolerance", kCertificationTol);
      cert.gap = c.value("gap", 0.0);
    }
    const auto prov = witness::provenance_from_string(j.value("provenance", std::string("user")));
    return witness::Witness::trusted(op, dims, j["k"].get<int>(), prov, cert);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed witness JSON: ") + e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_output(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace qsw::io
