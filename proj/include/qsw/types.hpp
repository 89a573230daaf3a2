#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative cut used for every numerical rank decision (range, kernel, Schmidt rank).
inline constexpr double kRankTol = 1e-7;

/// Threshold below which a witness expectation over the (k-1) set counts as non-negative.
inline constexpr double kCertificationTol = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A witness (or edge-state premise) failed its optimizer-backed certification.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

/// A subspace that was required to hold no vector of Schmidt rank < k holds one.
class RankViolationError : public CertificationError {
 public:
  RankViolationError(const std::string& what, double value, Vector vector)
      : CertificationError(what, value), vector_(std::move(vector)) {}
  const Vector& vector() const { return vector_; }

 private:
  Vector vector_;
};

/// An intermediate quantity broke an invariant it should hold analytically.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Local dimensions of a bipartite space with the m <= n convention.
///
/// Composite index of |a>|b> is a*n + b throughout the library.
struct BipartiteDims {
  int m = 1;
  int n = 1;
  /// True when the caller's subsystems were exchanged to satisfy m <= n.
  bool swapped = false;

  BipartiteDims() = default;
  BipartiteDims(int dim_a, int dim_b) : m(dim_a), n(dim_b) {
    if (m < 1 || n < 1) throw ValidationError("subsystem dimensions must be positive");
    if (m > n)
      throw ValidationError("dimension of subsystem A must not exceed B; use BipartiteDims::ordered");
  }

  /// Builds dims for (dim_a, dim_b), exchanging the subsystems if dim_a > dim_b.
  static BipartiteDims ordered(int dim_a, int dim_b) {
    if (dim_a <= dim_b) return {dim_a, dim_b};
    BipartiteDims d(dim_b, dim_a);
    d.swapped = true;
    return d;
  }

  int total() const { return m * n; }

  friend bool operator==(const BipartiteDims& x, const BipartiteDims& y) { return x.m == y.m && x.n == y.n; }
};

}  // namespace qsw
