#pragma once

// Reference computations that avoid the library's own code paths: explicit index loops,
// general (non-Hermitian) eigensolvers, reduced density matrices and brute-force sampling.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qsw/types.hpp"

namespace oracle {

using qsw::cplx;
using qsw::Matrix;
using qsw::RealVector;
using qsw::Vector;

/// <a b|X^T_A|a' b'> = <a' b|X|a b'>, written as four nested loops.
inline Matrix partial_transpose_a(const Matrix& x, int m, int n) {
  Matrix out(m * n, m * n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b)
      for (int a2 = 0; a2 < m; ++a2)
        for (int b2 = 0; b2 < n; ++b2) out(a * n + b, a2 * n + b2) = x(a2 * n + b, a * n + b2);
  return out;
}

/// Eigenvalues via the general complex solver, real parts sorted descending.
inline std::vector<double> eigenvalues(const Matrix& x) {
  Eigen::ComplexEigenSolver<Matrix> es(x, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline double min_eigenvalue(const Matrix& x) { return eigenvalues(x).back(); }

inline int rank(const Matrix& x, double rel = 1e-7) {
  const auto ev = eigenvalues(x);
  double top = 0.0;
  for (double v : ev) top = std::max(top, std::abs(v));
  return static_cast<int>(std::count_if(ev.begin(), ev.end(), [&](double v) { return std::abs(v) > rel * top; }));
}

/// Schmidt coefficients from the spectrum of the reduced state on A.
inline std::vector<double> schmidt_coefficients(const Vector& v, int m, int n) {
  Matrix reduced = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int a2 = 0; a2 < m; ++a2)
      for (int b = 0; b < n; ++b) reduced(a, a2) += v(a * n + b) * std::conj(v(a2 * n + b));
  auto ev = eigenvalues(reduced);
  for (double& x : ev) x = std::sqrt(std::max(0.0, x));
  return ev;
}

inline int schmidt_rank(const Vector& v, int m, int n, double rel = 1e-7) {
  const auto c = schmidt_coefficients(v, m, n);
  return static_cast<int>(std::count_if(c.begin(), c.end(), [&](double x) { return x > rel * c.front(); }));
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

inline Vector gaussian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

/// Random unit vector of Schmidt rank <= r built as sum of r random product terms.
inline Vector random_rank_r(int m, int n, int r, std::mt19937_64& rng) {
  Vector v = Vector::Zero(m * n);
  for (int i = 0; i < r; ++i) v += tensor(gaussian(m, rng), gaussian(n, rng));
  return v.normalized();
}

/// |Psi+> = sum_i |ii> / sqrt(m) with explicit indices.
inline Vector max_entangled(int m) {
  Vector v = Vector::Zero(m * m);
  for (int i = 0; i < m; ++i) v(i * m + i) = 1.0 / std::sqrt(double(m));
  return v;
}

/// Exchange operator |ab> -> |ba> with explicit indices.
inline Matrix swap(int m) {
  Matrix s = Matrix::Zero(m * m, m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) s(b * m + a, a * m + b) = 1.0;
  return s;
}

inline double max_abs(const Matrix& x) { return x.cwiseAbs().maxCoeff(); }

/// Distance of v from span(basis) after least squares, basis not assumed orthonormal.
inline double distance_to_span(const Matrix& basis, const Vector& v) {
  const Vector coeffs = basis.colPivHouseholderQr().solve(v);
  return (basis * coeffs - v).norm();
}

/// Brute-force lower envelope of <psi|A|psi> over random Schmidt-rank-r unit vectors.
inline double sampled_min(const Matrix& a, int m, int n, int r, int samples, std::mt19937_64& rng) {
  double best = 1e300;
  for (int s = 0; s < samples; ++s) {
    const Vector v = random_rank_r(m, n, r, rng);
    best = std::min(best, v.dot(a * v).real());
  }
  return best;
}

}  // namespace oracle
