#include "kaar/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "kaar/algebra.hpp"
#include "kaar/error.hpp"

namespace kaar {

namespace {

Eigen::LLT<Matrix> regularized_cholesky(Matrix k, double ridge) {
  k.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("regularized Gram matrix is not positive definite");
  }
  return llt;
}

void check_ridge(double ridge) {
  if (!(ridge > 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be finite and > 0");
}

}  // namespace

ComparatorOptimum comparator_optimum(const Kernel& kernel, double ridge, const Sequence& data) {
  check_ridge(ridge);
  if (data.empty()) throw InvalidArgument("comparator_optimum: empty sequence");
  const Matrix k = gram_entries(kernel, data.signals);
  const Vector y = data.outcome_vector();

  ComparatorOptimum opt;
  opt.coefficients = regularized_cholesky(k, ridge).solve(y);
  const Vector fitted = k * opt.coefficients;
  opt.loss = (fitted - y).squaredNorm();
  opt.regularizer = ridge * opt.coefficients.dot(fitted);
  opt.value = opt.loss + opt.regularizer;
  return opt;
}

double comparator_objective(const ObliviousPredictor& predictor, double ridge, const Sequence& data) {
  const Vector c = Eigen::Map<const Vector>(predictor.coefficients.data(),
                                            static_cast<Eigen::Index>(predictor.coefficients.size()));
  const Matrix kz = gram_entries(predictor.kernel, predictor.anchors);
  return sequence_loss(predictor, data) + ridge * c.dot(kz * c);
}

double logdet_term(const Kernel& kernel, double ridge, std::span<const Signal> signals,
                   double y_bound) {
  check_ridge(ridge);
  if (!(y_bound > 0.0)) throw InvalidArgument("Y must be > 0");
  if (signals.empty()) return 0.0;
  Matrix m = gram_entries(kernel, signals) / ridge;
  m.diagonal().array() += 1.0;
  return y_bound * y_bound * logdet_pd(m);
}

double linear_logdet_term(std::span<const Signal> signals, double ridge, double y_bound) {
  check_ridge(ridge);
  if (!(y_bound > 0.0)) throw InvalidArgument("Y must be > 0");
  if (signals.empty()) return 0.0;
  const auto n = signals.front().size();
  Matrix m = Matrix::Identity(n, n);
  for (const auto& x : signals) {
    if (x.size() != n) throw DimensionMismatch("signals have different dimensions");
    m.noalias() += (x / ridge) * x.transpose();
  }
  return y_bound * y_bound * logdet_pd(m);
}

std::string to_string(YBoundSource source) {
  return source == YBoundSource::declared ? "declared" : "inferred";
}

std::pair<double, YBoundSource> resolve_y_bound(std::span<const double> outcomes,
                                                std::optional<double> declared) {
  if (declared) {
    if (!(*declared > 0.0) || !std::isfinite(*declared)) throw InvalidArgument("Y must be finite and > 0");
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      if (std::abs(outcomes[t]) > *declared) {
        throw BoundViolation("outcome " + std::to_string(outcomes[t]) + " at trial " +
                             std::to_string(t + 1) + " exceeds the declared bound Y = " +
                             std::to_string(*declared));
      }
    }
    return {*declared, YBoundSource::declared};
  }
  double y = 0.0;
  for (double v : outcomes) y = std::max(y, std::abs(v));
  return {y > 0.0 ? y : 1.0, YBoundSource::inferred};
}

namespace {

void finish(BoundCertificate& cert) {
  cert.bound_total = cert.comparator_loss + cert.regularizer_term + cert.logdet_term;
  cert.slack = cert.bound_total - cert.actual_loss;
}

}  // namespace

BoundCertificate loss_bound_certificate(std::span<const TrialRecord> run, const Kernel& kernel,
                                      double ridge, std::optional<double> y_bound) {
  check_ridge(ridge);
  Sequence data;
  for (const auto& t : run) data.push_back(t.signal, t.outcome);

  BoundCertificate cert;
  std::tie(cert.y_bound, cert.y_bound_source) = resolve_y_bound(data.outcomes, y_bound);
  cert.actual_loss = total_loss(run);
  if (!data.empty()) {
    const ComparatorOptimum opt = comparator_optimum(kernel, ridge, data);
    cert.comparator_loss = opt.loss;
    cert.regularizer_term = opt.regularizer;
    cert.logdet_term = logdet_term(kernel, ridge, data.signals, cert.y_bound);
  }
  if (kernel.is_linear()) cert.primal_logdet_term = linear_logdet_term(data.signals, ridge, cert.y_bound);
  finish(cert);
  return cert;
}

BoundCertificate running_certificate(const KaarPredictor& state, std::optional<double> y_bound) {
  const Sequence& seen = state.seen();
  const double a = state.ridge();

  BoundCertificate cert;
  std::tie(cert.y_bound, cert.y_bound_source) = resolve_y_bound(seen.outcomes, y_bound);
  cert.actual_loss = state.cumulative_loss();
  if (!seen.empty()) {
    const RegularizedInverse& inv = state.regularized_inverse();
    const Vector y = seen.outcome_vector();
    const Vector c = inv.apply(y);
    // (K + aI)c = y, so Kc - y = -ac and c'Kc = c'y - a|c|^2.
    cert.comparator_loss = a * a * c.squaredNorm();
    cert.regularizer_term = a * c.dot(y) - cert.comparator_loss;
    const double t = static_cast<double>(seen.size());
    cert.logdet_term = cert.y_bound * cert.y_bound * (inv.logdet() - t * std::log(a));
  }
  if (state.kernel().is_linear()) {
    cert.primal_logdet_term = linear_logdet_term(seen.signals, a, cert.y_bound);
  }
  finish(cert);
  return cert;
}

nlohmann::json to_json(const BoundCertificate& cert) {
  return nlohmann::json{{"actual_loss", cert.actual_loss},
                        {"comparator_loss", cert.comparator_loss},
                        {"regularizer_term", cert.regularizer_term},
                        {"logdet_term", cert.logdet_term},
                        {"bound_total", cert.bound_total},
                        {"slack", cert.slack},
                        {"y_bound", cert.y_bound},
                        {"y_bound_source", to_string(cert.y_bound_source)}};
}

BoundCertificate certificate_from_json(const nlohmann::json& j) {
  BoundCertificate cert;
  cert.actual_loss = j.at("actual_loss").get<double>();
  cert.comparator_loss = j.at("comparator_loss").get<double>();
  cert.regularizer_term = j.at("regularizer_term").get<double>();
  cert.logdet_term = j.at("logdet_term").get<double>();
  cert.bound_total = j.at("bound_total").get<double>();
  cert.slack = j.at("slack").get<double>();
  cert.y_bound = j.at("y_bound").get<double>();
  const auto source = j.at("y_bound_source").get<std::string>();
  if (source == "declared") {
    cert.y_bound_source = YBoundSource::declared;
  } else if (source == "inferred") {
    cert.y_bound_source = YBoundSource::inferred;
  } else {
    throw ParseError("unknown y_bound_source '" + source + "'");
  }
  return cert;
}

RelationReport relation_report(const Sequence& prefix, const Signal& x, const Kernel& kernel,
                               double ridge) {
  check_ridge(ridge);
  RelationReport rep;
  rep.gamma = kaar_predict_direct(kernel, ridge, prefix, x);

  const double k_self = kernel(x, x);
  if (prefix.empty()) {
    rep.schur = k_self + ridge;
  } else {
    const Vector k = kernel_column(kernel, prefix.signals, x);
    const Vector u = regularized_cholesky(gram_entries(kernel, prefix.signals), ridge).solve(k);
    rep.rr = prefix.outcome_vector().dot(u);
    rep.schur = k_self + ridge - k.dot(u);
  }
  rep.ratio_residual = std::abs(rep.gamma - ridge * rep.rr / rep.schur);

  if (kernel.is_linear()) {
    Matrix a = Matrix::Identity(x.size(), x.size()) * ridge;
    for (const auto& s : prefix.signals) a.noalias() += s * s.transpose();
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw NumericFailure("aI + sum x x' is not positive definite");
    const double q = x.dot(llt.solve(x));
    rep.linear_ratio_residual = std::abs(rep.gamma - rep.rr / (1.0 + q));
  }
  return rep;
}

}  // namespace kaar
