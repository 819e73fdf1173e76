#include "kaar/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaar/error.hpp"

namespace kaar {

namespace {

void check_outcome(double y) {
  if (!std::isfinite(y)) throw InvalidArgument("outcome is not finite");
}

void check_dimension(std::optional<Eigen::Index>& dimension, const Signal& x) {
  check_signal(x);
  if (!dimension) {
    dimension = x.size();
  } else if (*dimension != x.size()) {
    throw DimensionMismatch("signal has dimension " + std::to_string(x.size()) + ", expected " +
                            std::to_string(*dimension));
  }
}

// Solves (K + aI) v = rhs by Cholesky.
Vector regularized_solve(Matrix k, double ridge, const Vector& rhs) {
  k.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("regularized Gram matrix is not positive definite");
  }
  return llt.solve(rhs);
}

}  // namespace

double total_loss(std::span<const TrialRecord> trials) {
  double sum = 0.0;
  for (const auto& t : trials) sum += t.loss;
  return sum;
}

KaarPredictor::KaarPredictor(Kernel kernel, double ridge)
    : kernel_(std::move(kernel)), inverse_(ridge) {}

KaarPrediction KaarPredictor::predict(const Signal& x) const {
  auto dimension = dimension_;
  check_dimension(dimension, x);

  KaarPrediction p;
  p.signal = x;
  p.k_self = kernel_(x, x);
  p.k_cross = kernel_column(kernel_, seen_.signals, x);
  if (seen_.empty()) {
    p.schur = p.k_self + ridge();
    return p;
  }
  const Vector u = inverse_.apply(p.k_cross);
  p.rr = seen_.outcome_vector().dot(u);
  p.schur = p.k_self + ridge() - p.k_cross.dot(u);
  if (!(p.schur > schur_floor(ridge(), p.k_self))) {
    throw NumericFailure("Schur complement " + std::to_string(p.schur) +
                         " is at or below the numeric floor");
  }
  p.gamma = ridge() * p.rr / p.schur;
  return p;
}

TrialRecord KaarPredictor::observe(const KaarPrediction& prediction, double y) {
  check_outcome(y);
  check_dimension(dimension_, prediction.signal);
  if (static_cast<std::size_t>(prediction.k_cross.size()) != seen_.size()) {
    throw InvalidArgument("prediction was not made on the current state");
  }
  inverse_.extend(prediction.k_cross, prediction.k_self);
  seen_.push_back(prediction.signal, y);

  TrialRecord rec;
  rec.index = seen_.size();
  rec.signal = prediction.signal;
  rec.prediction = prediction.gamma;
  rec.outcome = y;
  rec.loss = (y - prediction.gamma) * (y - prediction.gamma);
  cum_loss_ += rec.loss;
  return rec;
}

AarPredictor::AarPredictor(Eigen::Index dimension, double ridge)
    : ridge_(ridge), a_(Matrix::Identity(dimension, dimension) * ridge), b_(Vector::Zero(dimension)) {
  if (dimension < 1) throw InvalidArgument("AAR needs dimension >= 1");
  if (!(ridge > 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be finite and > 0");
}

AarPrediction AarPredictor::predict(const Signal& x) const {
  check_signal(x);
  if (x.size() != dimension()) {
    throw DimensionMismatch("signal has dimension " + std::to_string(x.size()) + ", expected " +
                            std::to_string(dimension()));
  }
  Matrix a = a_;
  a.noalias() += x * x.transpose();
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericFailure("AAR matrix lost positive definiteness");
  return AarPrediction{b_.dot(llt.solve(x)), x};
}

TrialRecord AarPredictor::observe(const AarPrediction& prediction, double y) {
  check_outcome(y);
  const Signal& x = prediction.signal;
  if (x.size() != dimension()) throw DimensionMismatch("signal dimension changed between calls");
  a_.noalias() += x * x.transpose();
  b_ += y * x;
  ++count_;

  TrialRecord rec;
  rec.index = count_;
  rec.signal = x;
  rec.prediction = prediction.gamma;
  rec.outcome = y;
  rec.loss = (y - prediction.gamma) * (y - prediction.gamma);
  cum_loss_ += rec.loss;
  return rec;
}

RidgePredictor::RidgePredictor(Kernel kernel, double ridge)
    : kernel_(std::move(kernel)), inverse_(ridge) {}

double RidgePredictor::predict(const Signal& x) const {
  check_signal(x);
  if (seen_.empty()) return 0.0;
  if (x.size() != seen_.signals.front().size()) throw DimensionMismatch("signal dimension changed");
  const Vector k = kernel_column(kernel_, seen_.signals, x);
  return seen_.outcome_vector().dot(inverse_.apply(k));
}

TrialRecord RidgePredictor::update(const Signal& x, double y) {
  check_outcome(y);
  const double r = predict(x);
  inverse_.extend(kernel_column(kernel_, seen_.signals, x), kernel_(x, x));
  seen_.push_back(x, y);

  TrialRecord rec;
  rec.index = seen_.size();
  rec.signal = x;
  rec.prediction = r;
  rec.outcome = y;
  rec.loss = (y - r) * (y - r);
  cum_loss_ += rec.loss;
  return rec;
}

Vector krr_fit(const Kernel& kernel, double ridge, const Sequence& data) {
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be > 0");
  if (data.empty()) throw InvalidArgument("krr_fit: no data");
  return regularized_solve(gram_entries(kernel, data.signals), ridge, data.outcome_vector());
}

double krr_predict(const Vector& coefficients, std::span<const Signal> anchors,
                   const Kernel& kernel, const Signal& x) {
  if (static_cast<std::size_t>(coefficients.size()) != anchors.size()) {
    throw DimensionMismatch("coefficient and anchor counts differ");
  }
  return coefficients.dot(kernel_column(kernel, anchors, x));
}

double rr_prequential_predict(const Kernel& kernel, double ridge, const Sequence& prefix,
                              const Signal& x) {
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be > 0");
  if (prefix.empty()) return 0.0;
  return krr_predict(krr_fit(kernel, ridge, prefix), prefix.signals, kernel, x);
}

double kaar_predict_direct(const Kernel& kernel, double ridge, const Sequence& prefix,
                           const Signal& x) {
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be > 0");
  std::vector<Signal> points = prefix.signals;
  points.push_back(x);
  Vector padded = Vector::Zero(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < prefix.size(); ++i) padded[static_cast<Eigen::Index>(i)] = prefix.outcomes[i];
  const Vector k = kernel_column(kernel, points, x);
  return padded.dot(regularized_solve(gram_entries(kernel, points), ridge, k));
}

double ObliviousPredictor::operator()(const Signal& x) const {
  if (coefficients.size() != anchors.size()) {
    throw DimensionMismatch("coefficient and anchor counts differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) sum += coefficients[i] * kernel(anchors[i], x);
  return sum;
}

double oblivious_predict(const ObliviousPredictor& predictor, const Signal& x) { return predictor(x); }

double sequence_loss(const ObliviousPredictor& predictor, const Sequence& data) {
  double sum = 0.0;
  for (std::size_t t = 0; t < data.size(); ++t) {
    const double e = predictor(data.signals[t]) - data.outcomes[t];
    sum += e * e;
  }
  return sum;
}

double clip_prediction(double prediction, double y_bound) {
  return std::clamp(prediction, -y_bound, y_bound);
}

}  // namespace kaar
