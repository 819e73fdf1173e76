#pragma once

#include "kaar/kernel.hpp"

// Reference computations that share no code path with the library: dense LU
// instead of Cholesky or incremental updates, explicit loops for Gram
// matrices, and an iterative minimizer instead of a closed form.

namespace kaar::checks {

/// (k(x_i, x_j))_ij by explicit double loop, evaluating both triangles.
Matrix gram_by_loops(const Kernel& kernel, const std::vector<Signal>& points);

Matrix lu_inverse(const Matrix& m);
double lu_determinant(const Matrix& m);
/// ln |det m| from LU pivots.
double lu_logdet(const Matrix& m);

/// Y~'(aI + K~)^-1 k~(x) with the full matrix solved by LU.
double direct_gamma(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x);

/// Ridge regression on the prefix, by LU. 0 for an empty prefix.
double ridge_prediction(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x);

/// k(x, x) + a - k'(K + aI)^-1 k, by LU.
double schur_by_lu(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x);

/// AAR's prediction from scratch in signal space: b'A^-1 x with
/// A = aI + sum_{s <= t} x_s x_s', b = sum_{s < t} y_s x_s.
double aar_gamma_primal(double ridge, const Sequence& prefix, const Signal& x);

/// min_c |Kc - y|^2 + a c'Kc by conjugate gradients on the normal equations.
struct IterativeMinimum {
  double value = 0.0;
  Vector coefficients;
  int iterations = 0;
};
IterativeMinimum minimize_regularized_loss(const Matrix& k, const Vector& y, double ridge);

}  // namespace kaar::checks
