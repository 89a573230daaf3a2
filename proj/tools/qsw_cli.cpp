// qsw: Schmidt-number witnesses, edge states and classification from the command line.
//
// Exit codes: 0 success, 2 input error, 3 certification failure, 1 numerical failure.

#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qsw/report.hpp"

using namespace qsw;
using io::json;

namespace {

struct Globals {
  std::uint64_t seed = rankopt::OptimizerConfig{}.seed;
  int restarts = rankopt::OptimizerConfig{}.restarts;
  std::optional<double> tol;
  std::string out;
  std::string format = "text";
};

rankopt::OptimizerConfig config(const Globals& g) {
  rankopt::OptimizerConfig cfg;
  cfg.seed = g.seed;
  cfg.restarts = g.restarts;
  cfg.validate();
  return cfg;
}

/// JSON goes to --out when given, else to stdout in json format; text goes to stdout otherwise.
void emit(const Globals& g, const json& j, const std::string& text) {
  if (!g.out.empty()) io::write_output(j, g.out);
  if (g.format == "json") {
    if (g.out.empty()) io::write_output(j, "");
  } else {
    std::cout << text;
  }
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& p : raw) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ValidationError("--param expects name=value, got '" + p + "'");
    try {
      out[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("--param value is not a number: '" + p + "'");
    }
  }
  return out;
}

std::string bounds_text(const report::SchmidtNumberBounds& b) {
  std::ostringstream s;
  s << "schmidt number in [" << b.lower << ", " << b.upper << "]\n";
  s << "  lower: " << b.lower_certificate.value("method", "") << "\n";
  s << "  upper: " << b.upper_certificate.value("method", "") << "\n";
  for (const auto& w : b.warnings) s << "  warning: " << w << "\n";
  return s.str();
}

std::string scan_text(const std::vector<report::ScanRow>& rows) {
  std::ostringstream s;
  s << std::left << std::setw(16) << "family" << std::setw(10) << "state" << std::setw(10) << "edge" << std::setw(4)
    << "L" << std::setw(8) << "psi2" << std::setw(10) << "schmidt2" << "witness\n";
  for (const auto& r : rows) {
    auto pair = [](int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; };
    s << std::setw(16) << r.family << std::setw(10) << pair(r.state_rank, r.state_pt_rank) << std::setw(10)
      << (r.edge_extracted ? pair(r.edge_rank, r.edge_pt_rank) : "-") << std::setw(4) << r.l_count << std::setw(8)
      << (r.psi2_found ? "yes" : "no") << std::setw(10)
      << (r.rank4_applies ? (r.schmidt2_certificate ? "yes" : "failed") : "n/a") << (r.witness_detects ? "yes" : "no")
      << "\n";
    for (const auto& e : r.errors) s << "    " << e << "\n";
  }
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number witnesses, edge states and classification"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed of the optimizer restarts");
  app.add_option("--restarts", g.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "Detection tolerance (classify) or certification tolerance (witness)");
  app.add_option("--out", g.out, "Write the JSON result to this file");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::function<void()> action;

  // classify
  auto* classify = app.add_subcommand("classify", "Bounds on the Schmidt number of a state");
  std::string state_path;
  int k_max = 0;
  classify->add_option("state", state_path, "State JSON file")->required();
  classify->add_option("--k-max", k_max, "Largest class tested (default m)");
  classify->callback([&] {
    action = [&] {
      const auto rho = io::state_from_json(io::read_file(state_path));
      const auto cfg = config(g);
      report::ClassifyOptions opts;
      opts.k_max = k_max;
      if (g.tol) opts.detect_tol = *g.tol;
      const auto bounds = report::classify(rho, cfg, opts);
      emit(g, report::to_json(bounds, rho, cfg), bounds_text(bounds));
    };
  });

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "Witness construction and evaluation");
  witness_cmd->require_subcommand(1);
  witness_cmd->fallthrough();
  int wm = 0, wk = 0;
  auto* iso = witness_cmd->add_subcommand("isotropic", "1 - (m/(k-1)) |Psi+><Psi+|");
  iso->add_option("--m", wm, "Local dimension")->required();
  iso->add_option("--k", wk, "Witness class")->required();
  iso->callback([&] {
    action = [&] {
      if (wm < 2 || wk < 2 || wk > wm) throw ValidationError("need 2 <= k <= m");
      const auto cfg = config(g);
      const Matrix w = witness::isotropic_matrix(wm, wk);
      const auto wit = witness::Witness::certify(w, BipartiteDims(wm, wm), wk, witness::Provenance::Isotropic, cfg,
                                                 g.tol.value_or(kCertificationTol));
      emit(g, io::to_json(wit), io::to_json(wit).dump(2) + "\n");
    };
  });

  auto* from_edge = witness_cmd->add_subcommand("from-edge", "Witness detecting an edge state");
  std::string edge_state_path;
  bool ppt_form = false;
  int fe_k = 2;
  from_edge->add_option("--state", edge_state_path, "Edge state JSON file")->required();
  from_edge->add_option("--k", fe_k, "Witness class");
  from_edge->add_flag("--ppt", ppt_form, "Use P + Q^T_A - eps 1 (k = 2, PPT edge states)");
  from_edge->callback([&] {
    action = [&] {
      const auto rho = io::state_from_json(io::read_file(edge_state_path));
      const auto cfg = config(g);
      const PositiveOperator delta(rho);
      const auto ew = ppt_form ? witness::witness_from_ppt_edge(delta, cfg) : witness::witness_from_edge(delta, fe_k, cfg);
      json j = io::to_json(ew.witness);
      j["epsilon"] = ew.epsilon;
      j["value_on_state"] = witness::evaluate(ew.witness, rho).value;
      emit(g, j, j.dump(2) + "\n");
    };
  });

  auto* optimize = witness_cmd->add_subcommand("optimize", "Subtract positive operators while the witness stays certified");
  std::string opt_path;
  optimize->add_option("--witness", opt_path, "Witness JSON file")->required();
  optimize->callback([&] {
    action = [&] {
      const auto w = io::witness_from_json(io::read_file(opt_path));
      const auto res = rankopt::optimize_witness(w, config(g));
      std::ostringstream text;
      text << "rounds " << res.rounds.size() << ", final span " << res.final_span_dim << " of "
           << w.dims().total() << (res.optimal ? " (optimal)" : "") << "\n";
      emit(g, io::to_json(res), text.str());
    };
  });

  auto* evaluate = witness_cmd->add_subcommand("evaluate", "Tr(W rho)");
  std::string eval_w, eval_s;
  evaluate->add_option("--witness", eval_w, "Witness JSON file")->required();
  evaluate->add_option("--state", eval_s, "State JSON file")->required();
  evaluate->callback([&] {
    action = [&] {
      const auto w = io::witness_from_json(io::read_file(eval_w));
      const auto rho = io::state_from_json(io::read_file(eval_s));
      const auto e = witness::evaluate(w, rho);
      emit(g, json{{"value", e.value}, {"imag_residue", e.imag_residue}}, fmt(e.value) + "\n");
    };
  });

  // edge
  auto* edge_cmd = app.add_subcommand("edge", "Edge-state decompositions");
  edge_cmd->require_subcommand(1);
  edge_cmd->fallthrough();
  auto* decompose = edge_cmd->add_subcommand("decompose", "Greedy split into rank < k vectors and an edge state");
  std::string dec_path;
  int dec_k = 2;
  bool preserve = false;
  decompose->add_option("state", dec_path, "State JSON file")->required();
  decompose->add_option("--k", dec_k, "Class of the edge state");
  decompose->add_flag("--preserve-ppt", preserve, "Subtract only PPT-compatible product vectors (k = 2)");
  decompose->callback([&] {
    action = [&] {
      const auto rho = io::state_from_json(io::read_file(dec_path));
      const auto dec = edge::edge_decompose(rho, dec_k, config(g), edge::DecomposeOptions{preserve, 256});
      std::ostringstream text;
      text << dec.components.size() << " components, edge weight " << fmt(dec.p)
           << (dec.fully_decomposed ? " (fully decomposed)" : "") << "\n";
      emit(g, io::to_json(dec), text.str());
    };
  });

  auto* rank4 = edge_cmd->add_subcommand("rank4", "Schmidt-number-2 decomposition of a rank-4 PPT state on 3 x 3");
  std::string rank4_path;
  rank4->add_option("state", rank4_path, "State JSON file")->required();
  rank4->callback([&] {
    action = [&] {
      const auto rho = io::state_from_json(io::read_file(rank4_path));
      const auto cert = edge::rank4_schmidt2(rho, config(g));
      std::ostringstream text;
      text << cert.components.size() << " components of Schmidt rank <= 2, reconstruction error "
           << fmt(cert.reconstruction_error) << "\n";
      emit(g, io::to_json(cert), text.str());
    };
  });

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "Named state families");
  catalog_cmd->require_subcommand(1);
  catalog_cmd->fallthrough();
  auto* list = catalog_cmd->add_subcommand("list", "List families and default parameters");
  list->callback([&] {
    action = [&] {
      json j = json::array();
      std::ostringstream text;
      for (const auto& f : catalog::families()) {
        json params = json::object();
        text << f.name;
        for (const auto& p : f.defaults) {
          params[p.name] = p.value;
          text << " " << p.name << "=" << fmt(p.value);
        }
        text << "\n    " << f.summary << "\n";
        j.push_back({{"name", f.name}, {"summary", f.summary}, {"defaults", params}, {"ppt_entangled", f.ppt_entangled}});
      }
      emit(g, j, text.str());
    };
  });
  auto* emit_cmd = catalog_cmd->add_subcommand("emit", "Write a family member as state JSON");
  std::string family;
  std::vector<std::string> params;
  emit_cmd->add_option("name", family, "Family name")->required();
  emit_cmd->add_option("--param", params, "Parameter override name=value (repeatable)");
  emit_cmd->callback([&] {
    action = [&] {
      const auto entry = catalog::make(family, parse_params(params));
      const json j = io::to_json(entry);
      if (g.out.empty()) {
        io::write_output(j, "");
      } else {
        io::write_output(j, g.out);
        if (g.format == "text") std::cout << "wrote " << entry.name << " to " << g.out << "\n";
      }
      for (const auto& f : entry.flags) std::cerr << "warning: " << f << "\n";
    };
  });

  // conjecture
  auto* conjecture = app.add_subcommand("conjecture", "Evidence over the PPT entangled catalog");
  conjecture->require_subcommand(1);
  conjecture->fallthrough();
  auto* scan = conjecture->add_subcommand("scan", "Edge ranks, rank-2 search and rank-4 certificates per family");
  scan->callback([&] {
    action = [&] {
      const auto cfg = config(g);
      const auto rows = report::conjecture_scan(cfg);
      emit(g, report::to_json(rows, cfg), scan_text(rows));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << " (value " << e.value() << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
