#pragma once

#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "kaar/kernel.hpp"
#include "kaar/predictors.hpp"

namespace kaar {

/// The best oblivious kernel predictor under the regularized loss
///
///   Loss_S + a * sum_ij c_i c_j k(z_i, z_j).
///
/// The loss only depends on predictor values at the data signals and the
/// regularizer is the induced quadratic form, so the infimum is attained by
/// anchors at the data signals with c = (K + aI)^-1 Y. Its value is
/// a * Y'(K + aI)^-1 Y.
struct ComparatorOptimum {
  double value = 0.0;        // loss + regularizer
  double loss = 0.0;         // sum_t (sum_i c_i k(x_i, x_t) - y_t)^2
  double regularizer = 0.0;  // a * c'Kc
  Vector coefficients;
};

ComparatorOptimum comparator_optimum(const Kernel& kernel, double ridge, const Sequence& data);

/// Loss_S + a * c'K_z c of an arbitrary oblivious predictor.
double comparator_objective(const ObliviousPredictor& predictor, double ridge, const Sequence& data);

/// Y^2 ln det(I + K/a) over the given signals; 0 for none.
double logdet_term(const Kernel& kernel, double ridge, std::span<const Signal> signals,
                   double y_bound);

/// Y^2 ln det(I + (1/a) sum_t x_t x_t'), the n x n form of the same term for
/// the linear kernel.
double linear_logdet_term(std::span<const Signal> signals, double ridge, double y_bound);

enum class YBoundSource { declared, inferred };

std::string to_string(YBoundSource source);

/// Every term of
///
///   Loss_KAAR(S) <= inf (Loss_S + a sum c_i c_j k(z_i, z_j)) + Y^2 ln det(I + K~/a)
///
/// together with the realized loss.
struct BoundCertificate {
  double actual_loss = 0.0;
  double comparator_loss = 0.0;
  double regularizer_term = 0.0;
  double logdet_term = 0.0;
  double bound_total = 0.0;
  double slack = 0.0;  // bound_total - actual_loss
  double y_bound = 0.0;
  YBoundSource y_bound_source = YBoundSource::declared;
  /// Linear kernel only: the logdet term computed in signal space.
  std::optional<double> primal_logdet_term;
};

/// Resolves the outcome bound. A declared bound is checked against every
/// outcome (BoundViolation on excess); without one, Y = max |y_t|, or 1 if
/// every outcome is zero.
std::pair<double, YBoundSource> resolve_y_bound(std::span<const double> outcomes,
                                                std::optional<double> declared);

/// Post-hoc certificate for a completed KAAR (or, with the linear kernel, AAR)
/// run. Recomputes the full Gram matrix.
BoundCertificate loss_bound_certificate(std::span<const TrialRecord> run, const Kernel& kernel,
                                      double ridge, std::optional<double> y_bound);

/// Certificate from a live KAAR state, reusing its regularized inverse and
/// telescoped log-determinant instead of refactorizing.
BoundCertificate running_certificate(const KaarPredictor& state, std::optional<double> y_bound);

/// Flat JSON with keys actual_loss, comparator_loss, regularizer_term,
/// logdet_term, bound_total, slack, y_bound, y_bound_source.
nlohmann::json to_json(const BoundCertificate& cert);
BoundCertificate certificate_from_json(const nlohmann::json& j);

/// KAAR <-> ridge regression relations at one trial, every quantity computed
/// directly from the prefix:
///   gamma = Y~'(aI + K~)^-1 k~(x)          (full t x t system)
///   rr    = Y'(aI + K)^-1 k(x)             (prefix system)
///   schur = k(x, x) + a - k'(K + aI)^-1 k
///   ratio_residual = |gamma - a rr / schur|
///   linear_ratio_residual = |gamma - rr / (1 + x'A^-1 x)|, A = aI + sum x_s x_s'  (linear only)
struct RelationReport {
  double gamma = 0.0;
  double rr = 0.0;
  double schur = 0.0;
  double ratio_residual = 0.0;
  std::optional<double> linear_ratio_residual;
};

RelationReport relation_report(const Sequence& prefix, const Signal& x, const Kernel& kernel,
                               double ridge);

}  // namespace kaar
