#include "qsw/catalog.hpp"

#include <cmath>

namespace qsw::catalog {

namespace {

const BipartiteDims kQutrits(3, 3);

int index(int a, int b) { return 3 * a + b; }

Vector from_amplitudes(std::initializer_list<double> entries) {
  Vector v(9);
  int i = 0;
  for (double x : entries) v(i++) = x;
  return v;
}

void check_rank(CatalogEntry& e) {
  if (!e.expected.rank) return;
  const int r = spectral(e.state.matrix()).rank;
  if (r != *e.expected.rank)
    e.flags.push_back("rank " + std::to_string(r) + ", expected " + std::to_string(*e.expected.rank));
}

}  // namespace

DensityMatrix isotropic_state(int m, double p) {
  if (m < 2) throw ValidationError("isotropic_state: m must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("isotropic_state: p must lie in [0, 1]");
  const BipartiteDims dims(m, m);
  const Matrix rho = p * PureState::maximally_entangled(m).projector() +
                     (1.0 - p) / (m * m) * Matrix::Identity(m * m, m * m);
  return DensityMatrix::from_operator(rho, dims);
}

CatalogEntry isotropic_entry(int m, double p) {
  const double threshold = 1.0 / (m + 1);
  Expected ex;
  ex.ppt = p <= threshold;
  ex.entangled = p > threshold;
  ex.rank = p == 1.0 ? 1 : m * m;
  ex.note = "entangled iff p > 1/(m+1)";
  return {"isotropic", {{"m", double(m)}, {"p", p}}, isotropic_state(m, p), ex, {}};
}

std::vector<Vector> tiles_vectors() {
  const double h = 1.0 / std::sqrt(2.0);
  const Vector e0 = Vector::Unit(3, 0), e1 = Vector::Unit(3, 1), e2 = Vector::Unit(3, 2);
  const Vector all = Vector::Ones(3) / std::sqrt(3.0);
  return {kron(e0, Vector((e0 - e1) * h)), kron(Vector((e0 - e1) * h), e2), kron(e2, Vector((e1 - e2) * h)),
          kron(Vector((e1 - e2) * h), e0), kron(all, all)};
}

CatalogEntry upb_tiles_state() {
  Matrix rho = Matrix::Identity(9, 9);
  for (const Vector& u : tiles_vectors()) rho -= u * u.adjoint();
  Expected ex;
  ex.ppt = true;
  ex.rank = 4;
  ex.pt_rank = 4;
  ex.entangled = true;
  ex.range_product_free = true;
  ex.note = "complement of an unextendible product basis";
  CatalogEntry e{"upb_tiles", {}, DensityMatrix::from_operator(rho / 4.0, kQutrits), ex, {}};
  check_rank(e);
  return e;
}

CatalogEntry horodecki_alpha_state(double alpha) {
  if (!(alpha >= 2.0 && alpha <= 5.0)) throw ValidationError("horodecki_alpha_state: alpha must lie in [2, 5]");
  Matrix rho = 2.0 / 7.0 * PureState::maximally_entangled(3).projector();
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    rho(index(i, j), index(i, j)) += alpha / 21.0;
    rho(index(j, i), index(j, i)) += (5.0 - alpha) / 21.0;
  }
  Expected ex;
  ex.ppt = alpha <= 4.0;
  ex.entangled = alpha > 3.0;
  ex.rank = alpha < 5.0 ? 7 : 4;
  ex.pt_rank = alpha == 4.0 ? 6 : 9;
  ex.note = "PPT for alpha <= 4, separable for alpha <= 3, NPPT above 4";
  CatalogEntry e{"horodecki_alpha", {{"alpha", alpha}}, DensityMatrix::from_operator(rho, kQutrits), ex, {}};
  check_rank(e);
  return e;
}

CatalogEntry chessboard_state(const std::vector<double>& params) {
  if (params.size() != 6) throw ValidationError("chessboard_state: expected six parameters a, b, c, d, m, n");
  const double a = params[0], b = params[1], c = params[2], d = params[3], m = params[4], n = params[5];
  if (m == 0.0 || n == 0.0) throw ValidationError("chessboard_state: m and n must be nonzero");
  const double s = a * c / n, t = a * d / m;
  const std::vector<Vector> gens = {from_amplitudes({m, 0, s, 0, n, 0, 0, 0, 0}),
                                    from_amplitudes({0, a, 0, b, 0, c, 0, 0, 0}),
                                    from_amplitudes({n, 0, 0, 0, -m, 0, t, 0, 0}),
                                    from_amplitudes({0, b, 0, -a, 0, 0, 0, d, 0})};
  Matrix rho = Matrix::Zero(9, 9);
  for (const Vector& v : gens) rho += v * v.adjoint();
  if (rho.trace().real() <= 0.0) throw ValidationError("chessboard_state: all generators vanish");
  Expected ex;
  ex.ppt = true;
  ex.rank = 4;
  ex.pt_rank = 4;
  ex.entangled = true;
  ex.range_product_free = true;
  ex.note = "PPT by the choice s = ac/n, t = ad/m; entangled for generic parameters";
  CatalogEntry e{"chessboard",
                 {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"m", m}, {"n", n}},
                 DensityMatrix::from_operator(rho, kQutrits),
                 ex,
                 {}};
  check_rank(e);
  return e;
}

CatalogEntry choi_state(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ValidationError("choi_state: a, b, c must be positive");
  Matrix rho = Matrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rho(index(i, i), index(j, j)) = 1.0;
  const double w[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    rho(index(i, j), index(i, j)) = w[i];
    rho(index(j, i), index(j, i)) = 1.0 / w[i];
  }
  Expected ex;
  ex.ppt = true;
  ex.rank = 7;
  ex.pt_rank = 6;
  ex.entangled = std::abs(a * b * c - 1.0) > 1e-9;
  ex.note = "PPT for all positive a, b, c; entangled when abc != 1";
  CatalogEntry e{"choi", {{"a", a}, {"b", b}, {"c", c}}, DensityMatrix::from_operator(rho, kQutrits), ex, {}};
  check_rank(e);
  return e;
}

CatalogEntry horodecki_1997_state(double a) {
  if (!(a > 0.0 && a < 1.0)) throw ValidationError("horodecki_1997_state: a must lie in (0, 1)");
  Matrix rho = Matrix::Zero(9, 9);
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8}) rho(i, j) = a;
  for (int i : {1, 2, 3, 5, 7}) rho(i, i) = a;
  rho(6, 6) = (1.0 + a) / 2.0;
  rho(8, 8) = (1.0 + a) / 2.0;
  rho(6, 8) = rho(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
  Expected ex;
  ex.ppt = true;
  ex.rank = 7;
  ex.pt_rank = 6;
  ex.entangled = true;
  ex.note = "PPT entangled for 0 < a < 1";
  CatalogEntry e{"horodecki_1997", {{"a", a}}, DensityMatrix::from_operator(rho, kQutrits), ex, {}};
  check_rank(e);
  return e;
}

Matrix choi_map_witness(double a, double b, double c) {
  if (!(a >= 1.0) || a + b + c < 3.0 || b < 0.0 || c < 0.0 || (a <= 2.0 && b * c < (2.0 - a) * (2.0 - a)))
    throw ValidationError("choi_map_witness: map is not positive for these parameters");
  const double weights[3] = {a, b, c};
  Matrix w = Matrix::Zero(9, 9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // block (i, j) holds Phi(|i><j|)
      if (i == j)
        for (int r = 0; r < 3; ++r) w(3 * i + r, 3 * i + r) += weights[(i - r + 3) % 3];
      w(3 * i + i, 3 * j + j) -= 1.0;
    }
  return w;
}

const std::vector<NamedWitness>& witnesses() {
  static const std::vector<NamedWitness> list = {
      {"choi_map", {{"a", 2.0}, {"b", 0.0}, {"c", 1.0}}, choi_map_witness(2.0, 0.0, 1.0)},
      {"choi_map_mirror", {{"a", 2.0}, {"b", 1.0}, {"c", 0.0}}, choi_map_witness(2.0, 1.0, 0.0)},
  };
  return list;
}

const std::vector<Family>& families() {
  static const std::vector<Family> list = {
      {"isotropic", "p |Psi+><Psi+| + (1-p) 1/m^2", {{"m", 3}, {"p", 0.5}}, false},
      {"upb_tiles", "complement of the tiles unextendible product basis, rank 4", {}, true},
      {"horodecki_alpha", "2/7 Psi+ + alpha/7 s+ + (5-alpha)/7 s-", {{"alpha", 4.0}}, true},
      {"chessboard",
       "rank-4 chessboard state",
       {{"a", 1.0}, {"b", 0.7}, {"c", 0.6}, {"d", 0.9}, {"m", 1.3}, {"n", 0.8}},
       true},
      {"choi", "generalized Choi state", {{"a", 2.0}, {"b", 1.5}, {"c", 0.8}}, true},
      {"horodecki_1997", "3 x 3 family normalized by 8a+1", {{"a", 0.5}}, true},
  };
  return list;
}

CatalogEntry make(const std::string& name, const std::map<std::string, double>& overrides) {
  const Family* family = nullptr;
  for (const auto& f : families())
    if (f.name == name) family = &f;
  if (!family) throw ValidationError("unknown catalog family '" + name + "'");
  std::map<std::string, double> p;
  for (const auto& d : family->defaults) p[d.name] = d.value;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw ValidationError("family '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  if (name == "isotropic") {
    const double m = p["m"];
    if (m != std::floor(m)) throw ValidationError("isotropic: m must be an integer");
    return isotropic_entry(static_cast<int>(m), p["p"]);
  }
  if (name == "upb_tiles") return upb_tiles_state();
  if (name == "horodecki_alpha") return horodecki_alpha_state(p["alpha"]);
  if (name == "chessboard") return chessboard_state({p["a"], p["b"], p["c"], p["d"], p["m"], p["n"]});
  if (name == "choi") return choi_state(p["a"], p["b"], p["c"]);
  return horodecki_1997_state(p["a"]);
}

}  // namespace qsw::catalog
