#pragma once

#include <cstddef>

#include "kaar/kernel.hpp"

namespace kaar {

/// (aI + K)^-1 and ln det(aI + K) for a Gram matrix K that only ever grows by
/// appending one point at a time.
///
/// Appending a point with kernel column k and self value k(x, x) uses the
/// partitioned-inverse formulas with P = aI + K, Q = k, R = k', S = k(x, x) + a:
///
///   s    = S - k' P^-1 k            (Schur complement)
///   u    = P^-1 k
///   new  = [ P^-1 + u u' / s   -u / s ]
///          [ -u' / s            1 / s ]
///
/// and ln det grows by ln s. The whole step costs O(t^2).
class RegularizedInverse {
 public:
  /// The empty (t = 0) state. Throws InvalidArgument if ridge <= 0.
  explicit RegularizedInverse(double ridge);

  /// The t = 1 state for a single point with self value k_self.
  static RegularizedInverse initial(double ridge, double k_self);

  /// k(x, x) + a - k' (aI + K)^-1 k for a candidate point, without appending it.
  double schur_complement(const Vector& k_cross, double k_self) const;

  /// Appends a point and returns its Schur complement. Throws NumericFailure
  /// if the complement is at or below the numeric floor, which happens only
  /// for non-PSD kernels or catastrophic conditioning.
  double extend(const Vector& k_cross, double k_self);

  std::size_t size() const { return size_; }
  double ridge() const { return ridge_; }
  /// ln det(aI + K), accumulated as a sum of ln(schur) terms.
  double logdet() const { return logdet_; }

  auto inverse() const {
    const auto t = static_cast<Eigen::Index>(size_);
    return storage_.topLeftCorner(t, t);
  }

  /// (aI + K)^-1 v
  Vector apply(const Vector& v) const;

 private:
  void reserve(std::size_t capacity);

  double ridge_;
  double logdet_ = 0.0;
  std::size_t size_ = 0;
  Matrix storage_;
};

/// Smallest Schur complement accepted for a point with the given self value.
double schur_floor(double ridge, double k_self);

/// ln det of a symmetric positive definite matrix, as a sum of log pivots of
/// its Cholesky factor. Throws NumericFailure if the matrix is not PD.
double logdet_pd(const Matrix& m);

struct DeterminantIdentity {
  double lhs = 0.0;  // det(I + M'M)
  double rhs = 0.0;  // det(I + MM')
  bool pass = false;
};

/// Checks det(I + M'M) = det(I + MM') for an n x m matrix M, passing when
/// |lhs - rhs| <= rel_tol * max(1, |lhs|).
DeterminantIdentity det_identity_check(const Matrix& m, double rel_tol = 1e-9);

}  // namespace kaar
