#include "kaar/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kaar/error.hpp"

namespace kaar {

namespace {
constexpr double kSchurRelativeFloor = 1e-12;
}

double schur_floor(double ridge, double k_self) {
  return kSchurRelativeFloor * (ridge + std::abs(k_self));
}

RegularizedInverse::RegularizedInverse(double ridge) : ridge_(ridge) {
  if (!(ridge > 0.0) || !std::isfinite(ridge)) {
    throw InvalidArgument("ridge must be finite and > 0");
  }
}

RegularizedInverse RegularizedInverse::initial(double ridge, double k_self) {
  RegularizedInverse inv(ridge);
  if (!(ridge + k_self > 0.0)) throw InvalidArgument("initial inverse needs a + k(x, x) > 0");
  inv.extend(Vector(0), k_self);
  return inv;
}

void RegularizedInverse::reserve(std::size_t capacity) {
  const auto cap = static_cast<Eigen::Index>(capacity);
  if (storage_.rows() >= cap) return;
  Matrix grown(cap, cap);
  const auto t = static_cast<Eigen::Index>(size_);
  grown.topLeftCorner(t, t) = storage_.topLeftCorner(t, t);
  storage_.swap(grown);
}

double RegularizedInverse::schur_complement(const Vector& k_cross, double k_self) const {
  if (static_cast<std::size_t>(k_cross.size()) != size_) {
    throw DimensionMismatch("kernel column has length " + std::to_string(k_cross.size()) +
                            ", expected " + std::to_string(size_));
  }
  if (size_ == 0) return k_self + ridge_;
  return k_self + ridge_ - k_cross.dot(apply(k_cross));
}

Vector RegularizedInverse::apply(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != size_) {
    throw DimensionMismatch("vector length does not match inverse size");
  }
  Vector out(v.size());
  if (size_ > 0) out.noalias() = inverse().selfadjointView<Eigen::Lower>() * v;
  return out;
}

double RegularizedInverse::extend(const Vector& k_cross, double k_self) {
  if (static_cast<std::size_t>(k_cross.size()) != size_) {
    throw DimensionMismatch("kernel column has length " + std::to_string(k_cross.size()) +
                            ", expected " + std::to_string(size_));
  }
  const Vector u = apply(k_cross);
  const double schur = k_self + ridge_ - k_cross.dot(u);
  if (!(schur > schur_floor(ridge_, k_self)) || !std::isfinite(schur)) {
    std::ostringstream msg;
    msg << "Schur complement " << schur << " at point " << size_ + 1
        << " is at or below the numeric floor; the kernel is not positive semidefinite"
           " or the regularized Gram matrix is too badly conditioned";
    throw NumericFailure(msg.str());
  }

  if (storage_.rows() <= static_cast<Eigen::Index>(size_)) reserve(std::max<std::size_t>(8, 2 * size_));
  const auto t = static_cast<Eigen::Index>(size_);
  const Vector scaled = u / schur;

  auto prev = storage_.topLeftCorner(t, t);
  prev.noalias() += scaled * u.transpose();
  // Rank-one rounding is not symmetric; fold it back.
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = j + 1; i < t; ++i) {
      const double avg = 0.5 * (prev(i, j) + prev(j, i));
      prev(i, j) = avg;
      prev(j, i) = avg;
    }
  }
  storage_.block(t, 0, 1, t) = -scaled.transpose();
  storage_.block(0, t, t, 1) = -scaled;
  storage_(t, t) = 1.0 / schur;

  logdet_ += std::log(schur);
  ++size_;
  return schur;
}

double logdet_pd(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("logdet_pd: matrix is not square");
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("logdet_pd: matrix is not positive definite");
  }
  const auto diag = llt.matrixLLT().diagonal();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) throw NumericFailure("logdet_pd: matrix is not positive definite");
    sum += std::log(diag[i]);
  }
  return 2.0 * sum;
}

DeterminantIdentity det_identity_check(const Matrix& m, double rel_tol) {
  const Matrix small = Matrix::Identity(m.cols(), m.cols()) + m.transpose() * m;
  const Matrix large = Matrix::Identity(m.rows(), m.rows()) + m * m.transpose();
  DeterminantIdentity out;
  out.lhs = std::exp(logdet_pd(small));
  out.rhs = std::exp(logdet_pd(large));
  out.pass = std::abs(out.lhs - out.rhs) <= rel_tol * std::max(1.0, std::abs(out.lhs));
  return out;
}

}  // namespace kaar
