#include "kaar/checks/oracles.hpp"

#include <cmath>

namespace kaar::checks {

Matrix gram_by_loops(const Kernel& kernel, const std::vector<Signal>& points) {
  const auto t = static_cast<Eigen::Index>(points.size());
  Matrix k(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) k(i, j) = kernel(points[i], points[j]);
  }
  return k;
}

Matrix lu_inverse(const Matrix& m) { return Eigen::FullPivLU<Matrix>(m).inverse(); }

double lu_determinant(const Matrix& m) { return Eigen::FullPivLU<Matrix>(m).determinant(); }

double lu_logdet(const Matrix& m) {
  const Eigen::PartialPivLU<Matrix> lu(m);
  double sum = 0.0;
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) sum += std::log(std::abs(packed(i, i)));
  return sum;
}

namespace {

Vector column(const Kernel& kernel, const std::vector<Signal>& points, const Signal& x) {
  Vector k(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) k[static_cast<Eigen::Index>(i)] = kernel(points[i], x);
  return k;
}

Matrix regularized(const Kernel& kernel, double ridge, const std::vector<Signal>& points) {
  Matrix m = gram_by_loops(kernel, points);
  m.diagonal().array() += ridge;
  return m;
}

}  // namespace

double direct_gamma(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x) {
  std::vector<Signal> points = prefix.signals;
  points.push_back(x);
  Vector padded = Vector::Zero(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < prefix.size(); ++i) padded[static_cast<Eigen::Index>(i)] = prefix.outcomes[i];
  const Vector v = Eigen::PartialPivLU<Matrix>(regularized(kernel, ridge, points)).solve(column(kernel, points, x));
  return padded.dot(v);
}

double ridge_prediction(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x) {
  if (prefix.empty()) return 0.0;
  const Vector c = Eigen::PartialPivLU<Matrix>(regularized(kernel, ridge, prefix.signals))
                       .solve(prefix.outcome_vector());
  return c.dot(column(kernel, prefix.signals, x));
}

double schur_by_lu(const Kernel& kernel, double ridge, const Sequence& prefix, const Signal& x) {
  const double self = kernel(x, x) + ridge;
  if (prefix.empty()) return self;
  const Vector k = column(kernel, prefix.signals, x);
  return self - k.dot(Eigen::PartialPivLU<Matrix>(regularized(kernel, ridge, prefix.signals)).solve(k));
}

double aar_gamma_primal(double ridge, const Sequence& prefix, const Signal& x) {
  const auto n = x.size();
  Matrix a = Matrix::Identity(n, n) * ridge;
  Vector b = Vector::Zero(n);
  for (std::size_t s = 0; s < prefix.size(); ++s) {
    a += prefix.signals[s] * prefix.signals[s].transpose();
    b += prefix.outcomes[s] * prefix.signals[s];
  }
  a += x * x.transpose();
  return b.dot(Eigen::PartialPivLU<Matrix>(a).solve(x));
}

IterativeMinimum minimize_regularized_loss(const Matrix& k, const Vector& y, double ridge) {
  // Gradient of |Kc - y|^2 + a c'Kc is 2(K(K + aI)c - Ky).
  const Matrix h = k * k + ridge * k;
  const Vector g = k * y;
  const auto objective = [&](const Vector& c) {
    return (k * c - y).squaredNorm() + ridge * c.dot(k * c);
  };

  IterativeMinimum out;
  Vector c = Vector::Zero(y.size());
  const double g_norm = g.norm();
  if (g_norm == 0.0) {
    out.coefficients = c;
    out.value = objective(c);
    return out;
  }
  const int restart = static_cast<int>(y.size()) + 1;
  const int max_iterations = 200 * restart;
  Vector r = g - h * c;
  Vector p = r;
  double rr = r.squaredNorm();
  int since_restart = 0;
  for (; out.iterations < max_iterations; ++out.iterations) {
    if (std::sqrt(rr) <= 1e-15 * g_norm) break;
    const Vector hp = h * p;
    const double curvature = p.dot(hp);
    if (!(curvature > 0.0)) break;
    const double alpha = rr / curvature;
    c += alpha * p;
    if (++since_restart == restart) {
      r = g - h * c;
      p = r;
      rr = r.squaredNorm();
      since_restart = 0;
      continue;
    }
    r -= alpha * hp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  out.coefficients = c;
  out.value = objective(c);
  return out;
}

}  // namespace kaar::checks
