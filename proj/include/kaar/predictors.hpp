#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kaar/algebra.hpp"
#include "kaar/kernel.hpp"

namespace kaar {

/// One trial of the online protocol: the signal is read, the prediction is
/// made, and only then is the outcome read.
struct TrialRecord {
  std::size_t index = 0;  // 1-based trial number
  Signal signal;
  double prediction = 0.0;
  double outcome = 0.0;
  double loss = 0.0;  // (outcome - prediction)^2
};

/// Sum of the per-trial losses, accumulated in trial order.
double total_loss(std::span<const TrialRecord> trials);

/// What KAAR knows about the current trial before the outcome arrives.
struct KaarPrediction {
  double gamma = 0.0;  // KAAR prediction
  double schur = 0.0;  // k(x, x) + a - k'(K + aI)^-1 k
  double rr = 0.0;     // ridge regression prediction from the same prefix
  Signal signal;
  Vector k_cross;      // kernel column against the seen signals
  double k_self = 0.0;
};

/// Kernel Aggregating Algorithm Regression.
///
/// Predicts gamma_t = Y~'(aI + K~)^-1 k~(x_t), where Y~ is the outcome vector
/// padded with a zero for the current trial. The prediction is evaluated as
/// a * r_t / schur_t from the incrementally maintained (aI + K)^-1 over the
/// seen signals, at O(t^2) per trial.
class KaarPredictor {
 public:
  KaarPredictor(Kernel kernel, double ridge);

  /// Does not modify the state.
  KaarPrediction predict(const Signal& x) const;

  /// Absorbs the outcome for a prediction made on the current state.
  TrialRecord observe(const KaarPrediction& prediction, double y);

  /// predict() followed by observe().
  TrialRecord update(const Signal& x, double y) { return observe(predict(x), y); }

  const Kernel& kernel() const { return kernel_; }
  double ridge() const { return inverse_.ridge(); }
  std::size_t size() const { return seen_.size(); }
  const Sequence& seen() const { return seen_; }
  const RegularizedInverse& regularized_inverse() const { return inverse_; }
  double cumulative_loss() const { return cum_loss_; }

 private:
  Kernel kernel_;
  RegularizedInverse inverse_;
  Sequence seen_;
  double cum_loss_ = 0.0;
  std::optional<Eigen::Index> dimension_;
};

struct AarPrediction {
  double gamma = 0.0;
  Signal signal;
};

/// Aggregating Algorithm Regression on R^n.
///
///   A := aI; b := 0
///   each trial: A := A + x x'; predict b'A^-1 x; b := b + y x
class AarPredictor {
 public:
  AarPredictor(Eigen::Index dimension, double ridge);

  AarPrediction predict(const Signal& x) const;
  TrialRecord observe(const AarPrediction& prediction, double y);
  TrialRecord update(const Signal& x, double y) { return observe(predict(x), y); }

  Eigen::Index dimension() const { return b_.size(); }
  double ridge() const { return ridge_; }
  const Matrix& a_matrix() const { return a_; }
  const Vector& b_vector() const { return b_; }
  double cumulative_loss() const { return cum_loss_; }
  std::size_t size() const { return count_; }

 private:
  double ridge_;
  Matrix a_;
  Vector b_;
  double cum_loss_ = 0.0;
  std::size_t count_ = 0;
};

/// Online kernel ridge regression: r_t = Y'(aI + K)^-1 k(x_t) on the prefix.
class RidgePredictor {
 public:
  RidgePredictor(Kernel kernel, double ridge);

  double predict(const Signal& x) const;
  TrialRecord update(const Signal& x, double y);

  std::size_t size() const { return seen_.size(); }
  double cumulative_loss() const { return cum_loss_; }

 private:
  Kernel kernel_;
  RegularizedInverse inverse_;
  Sequence seen_;
  double cum_loss_ = 0.0;
};

/// Dual ridge regression coefficients c = (K + aI)^-1 Y.
Vector krr_fit(const Kernel& kernel, double ridge, const Sequence& data);

/// sum_i c_i k(anchor_i, x)
double krr_predict(const Vector& coefficients, std::span<const Signal> anchors,
                   const Kernel& kernel, const Signal& x);

/// Ridge regression trained on `prefix`, evaluated at x. 0 for an empty prefix.
double rr_prequential_predict(const Kernel& kernel, double ridge, const Sequence& prefix,
                              const Signal& x);

/// KAAR's prediction from the full t x t system Y~'(aI + K~)^-1 k~(x), at
/// O(t^3). Reference form for relation checks.
double kaar_predict_direct(const Kernel& kernel, double ridge, const Sequence& prefix,
                           const Signal& x);

/// A fixed predictor x -> sum_i c_i k(z_i, x).
struct ObliviousPredictor {
  Kernel kernel;
  std::vector<double> coefficients;
  std::vector<Signal> anchors;

  double operator()(const Signal& x) const;
};

double oblivious_predict(const ObliviousPredictor& predictor, const Signal& x);

/// Sum of squared errors of a fixed predictor over a sequence.
double sequence_loss(const ObliviousPredictor& predictor, const Sequence& data);

/// Clamps a prediction to [-y_bound, y_bound]. Not applied by default and
/// never to runs that are certified.
double clip_prediction(double prediction, double y_bound);

}  // namespace kaar
