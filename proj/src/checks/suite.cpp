#include "kaar/checks/suite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kaar/algebra.hpp"
#include "kaar/bounds.hpp"
#include "kaar/cap.hpp"
#include "kaar/checks/generators.hpp"
#include "kaar/checks/oracles.hpp"
#include "kaar/predictors.hpp"

namespace kaar::checks {

namespace {

// Largest residual/tolerance ratio seen; the check passes while it stays <= 1.
class Worst {
 public:
  void observe(double residual, double tolerance) {
    ratio_ = std::max(ratio_, residual / tolerance);
    if (!(residual <= tolerance)) ++failures_;
  }
  void fail() { ++failures_; }

  CheckResult result(std::string name) const {
    std::ostringstream detail;
    detail << "worst residual/tolerance " << ratio_ << ", failures " << failures_;
    return {std::move(name), failures_ == 0, detail.str()};
  }

 private:
  double ratio_ = 0.0;
  int failures_ = 0;
};

CheckResult kernel_symmetry(Rng& rng) {
  Worst w;
  for (int i = 0; i < 200; ++i) {
    const Kernel k = random_registered_kernel(rng);
    const auto n = uniform_int(rng, 1, 8);
    const Signal x = random_signal(rng, n), z = random_signal(rng, n);
    if (k(x, z) != k(z, x)) w.fail();
  }
  return w.result("kernel: eval(x, z) == eval(z, x)");
}

CheckResult gram_matches_eval(Rng& rng) {
  Worst w;
  for (const Kernel& k : registered_kernels()) {
    const auto n = uniform_int(rng, 1, 5);
    std::vector<Signal> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(random_signal(rng, n));
    const Matrix g = gram(k, pts).entries();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != k(pts[i], pts[j])) w.fail();
      }
    }
  }
  return w.result("kernel: gram entries equal pairwise eval");
}

CheckResult psd_families(Rng& rng) {
  Worst w;
  for (const Kernel& k : registered_kernels()) {
    for (int s = 0; s < 50; ++s) {
      const auto n = uniform_int(rng, 1, 6);
      std::vector<Signal> pts;
      const int size = uniform_int(rng, 1, 20);
      for (int i = 0; i < size; ++i) pts.push_back(random_signal(rng, n));
      const double scale = gram(k, pts).entries().cwiseAbs().maxCoeff();
      if (!psd_spot_check(k, pts, 1e-9 * (1.0 + scale)).pass) w.fail();
    }
  }
  return w.result("kernel: registered families pass the PSD spot check");
}

CheckResult incremental_inverse(Rng& rng) {
  Worst w;
  for (int inst = 0; inst < 10; ++inst) {
    const Kernel k = random_registered_kernel(rng);
    const double a = random_ridge(rng);
    const auto n = uniform_int(rng, 1, 6);
    std::vector<Signal> pts;
    RegularizedInverse inc(a);
    for (int t = 0; t < 60; ++t) {
      Signal x = random_signal(rng, n);
      inc.extend(kernel_column(k, pts, x), k(x, x));
      pts.push_back(std::move(x));
    }
    Matrix reg = gram_by_loops(k, pts);
    reg.diagonal().array() += a;
    const Matrix direct = lu_inverse(reg);
    w.observe((Matrix(inc.inverse()) - direct).norm(), 1e-8 * (1.0 + direct.norm()));
  }
  return w.result("algebra: incremental inverse matches direct inverse (T = 60)");
}

CheckResult telescoped_logdet(Rng& rng) {
  Worst w;
  for (int inst = 0; inst < 10; ++inst) {
    const Kernel k = random_registered_kernel(rng);
    const double a = random_ridge(rng);
    const auto n = uniform_int(rng, 1, 6);
    std::vector<Signal> pts;
    RegularizedInverse inc(a);
    for (int t = 0; t < 60; ++t) {
      Signal x = random_signal(rng, n);
      const double schur = inc.extend(kernel_column(k, pts, x), k(x, x));
      if (!(schur > 0.0)) w.fail();
      pts.push_back(std::move(x));
    }
    Matrix reg = gram_by_loops(k, pts);
    reg.diagonal().array() += a;
    w.observe(std::abs(inc.logdet() - logdet_pd(reg)), 1e-8);
  }
  return w.result("algebra: telescoped logdet matches Cholesky logdet, all Schur > 0");
}

CheckResult determinant_identity(Rng& rng) {
  Worst w;
  for (int i = 0; i < 100; ++i) {
    const Matrix m = random_matrix(rng, uniform_int(rng, 1, 8), uniform_int(rng, 1, 5), 2.0);
    const auto res = det_identity_check(m);
    if (!res.pass) w.fail();
    const double oracle = lu_determinant(Matrix::Identity(m.cols(), m.cols()) + m.transpose() * m);
    w.observe(std::abs(res.lhs - oracle), 1e-9 * std::max(1.0, std::abs(oracle)));
  }
  return w.result("algebra: det(I + M'M) == det(I + MM')");
}

struct RunChecks {
  Worst direct_form, linear_ratio, ratio, zero_pair, first_zero, loss_sum, linear_equivalence;
};

void check_kaar_run(const Kernel& k, double a, const Sequence& s, RunChecks& rc) {
  KaarPredictor kaar(k, a);
  std::vector<TrialRecord> trials;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const Sequence prefix = s.prefix(t);
    const Signal& x = s.signals[t];
    const KaarPrediction p = kaar.predict(x);
    if (t == 0 && p.gamma != 0.0) rc.first_zero.fail();

    const double tol = 1e-10 * (1.0 + std::abs(p.gamma));
    rc.direct_form.observe(std::abs(p.gamma - direct_gamma(k, a, prefix, x)), tol);
    rc.ratio.observe(std::abs(p.gamma - a * ridge_prediction(k, a, prefix, x) / p.schur), tol);

    Sequence padded = prefix;
    padded.push_back(x, 0.0);
    const Vector c = Eigen::PartialPivLU<Matrix>(
                         gram_by_loops(k, padded.signals) + a * Matrix::Identity(static_cast<Eigen::Index>(padded.size()), static_cast<Eigen::Index>(padded.size())))
                         .solve(padded.outcome_vector());
    rc.zero_pair.observe(std::abs(p.gamma - krr_predict(c, padded.signals, k, x)), tol);

    if (k.is_linear()) {
      Matrix am = Matrix::Identity(x.size(), x.size()) * a;
      for (const auto& z : prefix.signals) am += z * z.transpose();
      const double q = x.dot(lu_inverse(am) * x);
      rc.linear_ratio.observe(std::abs(p.gamma - ridge_prediction(k, a, prefix, x) / (1.0 + q)), tol);
    }
    trials.push_back(kaar.observe(p, s.outcomes[t]));
  }
  double sum = 0.0;
  for (const auto& t : trials) sum += t.loss;
  if (sum != kaar.cumulative_loss()) rc.loss_sum.fail();
}

void check_linear_equivalence(Rng& rng, RunChecks& rc) {
  const auto n = uniform_int(rng, 1, 10);
  const double a = random_ridge(rng);
  const Sequence s = random_sequence(rng, static_cast<std::size_t>(uniform_int(rng, 1, 60)), n, 1.0);
  KaarPredictor kaar(Kernel::linear(), a);
  AarPredictor aar(n, a);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double gk = kaar.update(s.signals[t], s.outcomes[t]).prediction;
    const double ga = aar.update(s.signals[t], s.outcomes[t]).prediction;
    if (t == 0 && ga != 0.0) rc.first_zero.fail();
    rc.linear_equivalence.observe(std::abs(gk - ga), 1e-9 * std::max({1.0, std::abs(gk), std::abs(ga)}));
    rc.linear_equivalence.observe(std::abs(ga - aar_gamma_primal(a, s.prefix(t), s.signals[t])),
                      1e-9 * std::max(1.0, std::abs(ga)));
  }
}

CheckResult loss_bound(Rng& rng) {
  Worst w;
  for (int run = 0; run < 40; ++run) {
    const Kernel k = random_registered_kernel(rng);
    const double a = random_ridge(rng);
    const Sequence s = random_sequence(rng, static_cast<std::size_t>(uniform_int(rng, 1, 80)),
                                       uniform_int(rng, 1, 8), 1.0);
    KaarPredictor kaar(k, a);
    std::vector<TrialRecord> trials;
    for (std::size_t t = 0; t < s.size(); ++t) trials.push_back(kaar.update(s.signals[t], s.outcomes[t]));
    const BoundCertificate cert = loss_bound_certificate(trials, k, a, 1.0);
    w.observe(std::max(0.0, -cert.slack), 1e-6 * (1.0 + cert.bound_total));
    const BoundCertificate running = running_certificate(kaar, 1.0);
    w.observe(std::abs(running.bound_total - cert.bound_total), 1e-8 * (1.0 + cert.bound_total));
  }
  return w.result("bounds: loss <= comparator + regularizer + Y^2 ln det(I + K/a)");
}

CheckResult det_bridge(Rng& rng) {
  Worst w;
  for (int run = 0; run < 30; ++run) {
    const double a = random_ridge(rng);
    const auto n = uniform_int(rng, 1, 8);
    std::vector<Signal> pts;
    const int count = uniform_int(rng, 1, 40);
    for (int i = 0; i < count; ++i) pts.push_back(random_signal(rng, n));
    const double dual = logdet_term(Kernel::linear(), a, pts, 1.0);
    const double primal = linear_logdet_term(pts, a, 1.0);
    w.observe(std::abs(dual - primal), 1e-8);
  }
  return w.result("bounds: T x T and n x n logdet forms agree for the linear kernel");
}

CheckResult comparator_checks(Rng& rng) {
  Worst w;
  for (int inst = 0; inst < 10; ++inst) {
    const Kernel k = random_registered_kernel(rng);
    const double a = random_ridge(rng);
    const auto n = uniform_int(rng, 1, 4);
    const Sequence s = random_sequence(rng, static_cast<std::size_t>(uniform_int(rng, 1, 25)), n, 1.0);
    const ComparatorOptimum opt = comparator_optimum(k, a, s);
    const auto it = minimize_regularized_loss(gram_by_loops(k, s.signals), s.outcome_vector(), a);
    w.observe(std::abs(opt.value - it.value), 1e-6 * std::max(std::abs(it.value), 1e-12));
    for (int j = 0; j < 50; ++j) {
      const ObliviousPredictor p = random_oblivious(rng, k, n);
      const double obj = comparator_objective(p, a, s);
      w.observe(std::max(0.0, opt.value - obj), 1e-9 * (1.0 + obj));
    }
  }
  return w.result("bounds: comparator optimum matches iterative minimum and beats off-data anchors");
}

CheckResult cap_checks(Rng& rng) {
  Worst w;
  Sequence s;
  for (int t = 0; t < 40; ++t) {
    Signal x = random_signal(rng, 1);
    const double y = std::clamp(0.8 * x[0] * x[0] * x[0] + 0.05 * uniform(rng, -1.0, 1.0), -1.0, 1.0);
    s.push_back(std::move(x), y);
  }
  const CapSelection sel = cap_select(s, polynomial_family(), 1, 6, 1.0, 1.0);
  for (const auto& sc : sel.scores) {
    if (sc.total != sc.rr_loss + sc.logdet_term + sc.complexity_penalty) w.fail();
  }
  // Shifting every total by a constant must not move the argmin.
  int shifted_best = 0;
  double shifted_total = 0.0;
  for (const auto& sc : sel.scores) {
    const double shifted = sc.total + 1000.0;
    if (shifted_best == 0 || shifted < shifted_total || (shifted == shifted_total && sc.m < shifted_best)) {
      shifted_best = sc.m;
      shifted_total = shifted;
    }
  }
  if (shifted_best != sel.best_m) w.fail();
  for (int m = 2; m < 64; ++m) {
    if (complexity_penalty(m + 1, 1.0) < complexity_penalty(m, 1.0)) w.fail();
  }
  return w.result("cap: totals are sums of parts, argmin shift-invariant, penalty nondecreasing");
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  out.push_back(kernel_symmetry(rng));
  out.push_back(gram_matches_eval(rng));
  out.push_back(psd_families(rng));
  out.push_back(incremental_inverse(rng));
  out.push_back(telescoped_logdet(rng));
  out.push_back(determinant_identity(rng));

  RunChecks rc;
  for (int run = 0; run < 30; ++run) {
    const Kernel k = random_registered_kernel(rng);
    const double a = random_ridge(rng);
    const Sequence s = random_sequence(rng, static_cast<std::size_t>(uniform_int(rng, 1, 50)),
                                       uniform_int(rng, 1, 8), 1.0);
    check_kaar_run(k, a, s, rc);
  }
  for (int run = 0; run < 20; ++run) {
    const double a = random_ridge(rng);
    const auto n = uniform_int(rng, 1, 8);
    check_kaar_run(Kernel::linear(), a, random_sequence(rng, static_cast<std::size_t>(uniform_int(rng, 1, 50)), n, 1.0), rc);
    check_linear_equivalence(rng, rc);
  }
  out.push_back(rc.direct_form.result("predictors: incremental KAAR matches the full matrix form"));
  out.push_back(rc.ratio.result("predictors: gamma == a r / schur"));
  out.push_back(rc.linear_ratio.result("predictors: gamma == r / (1 + x'A^-1 x) (linear)"));
  out.push_back(rc.zero_pair.result("predictors: gamma == ridge regression with (x_t, 0) appended"));
  out.push_back(rc.linear_equivalence.result("predictors: KAAR(linear) == AAR"));
  out.push_back(rc.first_zero.result("predictors: first prediction is exactly 0"));
  out.push_back(rc.loss_sum.result("predictors: cumulative loss equals sum of trial losses"));

  out.push_back(loss_bound(rng));
  out.push_back(det_bridge(rng));
  out.push_back(comparator_checks(rng));
  out.push_back(cap_checks(rng));
  return out;
}

bool print_results(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.detail << ")\n";
    all = all && r.passed;
  }
  return all;
}

}  // namespace kaar::checks
