#include <cmath>

#include <gtest/gtest.h>

#include "kaar/checks/generators.hpp"
#include "kaar/checks/oracles.hpp"
#include "kaar/error.hpp"
#include "kaar/predictors.hpp"

namespace kaar {
namespace {

Signal sig(std::initializer_list<double> v) {
  Signal x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// A kernel on two tagged points with K(p, p) = K(q, q) = 1, K(p, q) = 0.5.
Kernel half_overlap_kernel() {
  return Kernel::custom("half", [](const Signal& a, const Signal& b) { return a[0] == b[0] ? 1.0 : 0.5; });
}

TEST(Kaar, FirstPredictionIsZero) {
  checks::Rng rng(2);
  for (const Kernel& k : checks::registered_kernels()) {
    KaarPredictor kaar(k, 0.1);
    const auto p = kaar.predict(checks::random_signal(rng, 3));
    EXPECT_EQ(p.gamma, 0.0);
    EXPECT_EQ(p.rr, 0.0);
  }
}

TEST(Kaar, LinearScalarCase) {
  // aI + K~ = [[2, 1], [1, 2]], Y~ = (1, 0), k~ = (1, 1) -> gamma = 1/3.
  KaarPredictor kaar(Kernel::linear(), 1.0);
  kaar.update(sig({1}), 1.0);
  const auto p = kaar.predict(sig({1}));
  EXPECT_NEAR(p.gamma, 1.0 / 3, 1e-15);
  EXPECT_NEAR(p.rr, 0.5, 1e-15);
  EXPECT_NEAR(p.schur, 1.5, 1e-15);
}

TEST(Kaar, HalfOverlapCase) {
  // aI + K~ = [[2, 0.5], [0.5, 2]] -> gamma = 2/15.
  KaarPredictor kaar(half_overlap_kernel(), 1.0);
  kaar.update(sig({1}), 1.0);
  const auto p = kaar.predict(sig({2}));
  EXPECT_NEAR(p.gamma, 2.0 / 15, 1e-15);
  EXPECT_NEAR(p.rr, 0.25, 1e-15);
  EXPECT_NEAR(p.schur, 15.0 / 8, 1e-15);
}

TEST(Kaar, PredictDoesNotMutate) {
  KaarPredictor kaar(Kernel::linear(), 1.0);
  kaar.update(sig({1}), 1.0);
  const auto p1 = kaar.predict(sig({2}));
  const auto p2 = kaar.predict(sig({2}));
  EXPECT_EQ(p1.gamma, p2.gamma);
  EXPECT_EQ(kaar.size(), 1u);
}

TEST(Kaar, FirstUpdateLossAndState) {
  KaarPredictor kaar(Kernel::linear(), 1.0);
  const TrialRecord rec = kaar.update(sig({1}), 1.0);
  EXPECT_EQ(rec.index, 1u);
  EXPECT_EQ(rec.prediction, 0.0);
  EXPECT_EQ(rec.loss, 1.0);
  EXPECT_EQ(kaar.cumulative_loss(), 1.0);
  EXPECT_EQ(kaar.size(), 1u);
  EXPECT_EQ(kaar.regularized_inverse().inverse()(0, 0), 0.5);
}

TEST(Kaar, OutcomeEqualToPredictionAddsNoLoss) {
  KaarPredictor kaar(Kernel::gaussian(1.0), 1.0);
  kaar.update(sig({0.2}), 0.7);
  const double before = kaar.cumulative_loss();
  const auto p = kaar.predict(sig({0.3}));
  kaar.observe(p, p.gamma);
  EXPECT_EQ(kaar.cumulative_loss(), before);
}

TEST(Kaar, DuplicateSignalsMatchDirectInverse) {
  const double a = 0.5;
  KaarPredictor kaar(Kernel::polynomial(2), a);
  kaar.update(sig({0.4, -1}), 0.3);
  kaar.update(sig({0.4, -1}), -0.2);
  Matrix reg = checks::gram_by_loops(Kernel::polynomial(2), kaar.seen().signals);
  reg.diagonal().array() += a;
  EXPECT_LT((Matrix(kaar.regularized_inverse().inverse()) - checks::lu_inverse(reg)).norm(), 1e-12);
  const auto p = kaar.predict(sig({0.4, -1}));
  EXPECT_GT(p.schur, a);
  EXPECT_NEAR(p.gamma, checks::direct_gamma(Kernel::polynomial(2), a, kaar.seen(), sig({0.4, -1})), 1e-12);
}

TEST(Kaar, RejectsBadInput) {
  KaarPredictor kaar(Kernel::linear(), 1.0);
  kaar.update(sig({1, 2}), 1.0);
  EXPECT_THROW(kaar.predict(sig({1})), DimensionMismatch);
  EXPECT_THROW(kaar.update(sig({1, 2}), NAN), InvalidArgument);
  EXPECT_THROW(kaar.predict(sig({1, INFINITY})), InvalidArgument);
  EXPECT_THROW(KaarPredictor(Kernel::linear(), 0.0), InvalidArgument);
}

TEST(Kaar, StalePredictionIsRejected) {
  KaarPredictor kaar(Kernel::linear(), 1.0);
  const auto stale = kaar.predict(sig({1}));
  kaar.update(sig({2}), 1.0);
  EXPECT_THROW(kaar.observe(stale, 0.0), InvalidArgument);
}

TEST(Kaar, NonPsdKernelAbortsWithNumericFailure) {
  const Kernel bad = Kernel::custom("bad", [](const Signal& a, const Signal& b) { return a[0] == b[0] ? 1.0 : 3.0; });
  KaarPredictor kaar(bad, 0.1);
  kaar.update(sig({0}), 1.0);
  EXPECT_THROW(kaar.predict(sig({1})), NumericFailure);
}

TEST(Kaar, RandomRunsSatisfyRelationIdentities) {
  checks::Rng rng(44);
  for (int run = 0; run < 12; ++run) {
    const Kernel k = checks::random_registered_kernel(rng);
    const double a = checks::random_ridge(rng);
    const Sequence s = checks::random_sequence(rng, 40, checks::uniform_int(rng, 1, 5), 1.0);
    KaarPredictor kaar(k, a);
    double sum = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
      const Sequence prefix = s.prefix(t);
      const auto p = kaar.predict(s.signals[t]);
      const double tol = 1e-10 * (1.0 + std::abs(p.gamma));
      EXPECT_NEAR(p.gamma, checks::direct_gamma(k, a, prefix, s.signals[t]), tol);
      EXPECT_NEAR(p.gamma, a * checks::ridge_prediction(k, a, prefix, s.signals[t]) / p.schur, tol);

      Sequence padded = prefix;
      padded.push_back(s.signals[t], 0.0);
      EXPECT_NEAR(p.gamma, rr_prequential_predict(k, a, padded, s.signals[t]), tol);
      sum += kaar.observe(p, s.outcomes[t]).loss;
    }
    EXPECT_EQ(sum, kaar.cumulative_loss());
  }
}

TEST(Aar, ScalarCases) {
  AarPredictor aar(1, 1.0);
  EXPECT_EQ(aar.predict(sig({1})).gamma, 0.0);
  aar.update(sig({1}), 1.0);
  // A = 1 + 1 + 1 = 3, b = 1.
  EXPECT_NEAR(aar.predict(sig({1})).gamma, 1.0 / 3, 1e-15);
  EXPECT_EQ(aar.predict(sig({0})).gamma, 0.0);
}

TEST(Aar, UpdatesAandB) {
  AarPredictor aar(2, 0.5);
  aar.update(sig({1, 2}), 3.0);
  Matrix a(2, 2);
  a << 1.5, 2, 2, 4.5;
  EXPECT_EQ(aar.a_matrix(), a);
  EXPECT_EQ(aar.b_vector(), sig({3, 6}));
}

TEST(Aar, MatchesKaarWithLinearKernel) {
  checks::Rng rng(9);
  for (int run = 0; run < 10; ++run) {
    const auto n = checks::uniform_int(rng, 1, 10);
    const double a = checks::random_ridge(rng);
    const Sequence s = checks::random_sequence(rng, 80, n, 1.0);
    KaarPredictor kaar(Kernel::linear(), a);
    AarPredictor aar(n, a);
    for (std::size_t t = 0; t < s.size(); ++t) {
      const double gk = kaar.update(s.signals[t], s.outcomes[t]).prediction;
      const double ga = aar.update(s.signals[t], s.outcomes[t]).prediction;
      EXPECT_LE(std::abs(gk - ga), 1e-9 * std::max({1.0, std::abs(gk), std::abs(ga)}));
    }
  }
}

TEST(Aar, DimensionChecks) {
  EXPECT_THROW(AarPredictor(0, 1.0), InvalidArgument);
  AarPredictor aar(2, 1.0);
  EXPECT_THROW(aar.predict(sig({1})), DimensionMismatch);
}

TEST(Krr, FitCases) {
  Sequence one;
  one.push_back(sig({1}), 1.0);
  EXPECT_NEAR(krr_fit(Kernel::linear(), 1.0, one)[0], 0.5, 1e-15);

  Sequence zeros;
  zeros.push_back(sig({1}), 0.0);
  zeros.push_back(sig({2}), 0.0);
  EXPECT_EQ(krr_fit(Kernel::gaussian(1.0), 1.0, zeros), Vector::Zero(2));

  // K = [[1, 1], [1, 1]], a = 1, y = (1, 1): (K + I) c = y -> c = (1/3, 1/3).
  Sequence two;
  two.push_back(sig({1}), 1.0);
  two.push_back(sig({1}), 1.0);
  const Vector c = krr_fit(Kernel::linear(), 1.0, two);
  EXPECT_NEAR(c[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(c[1], 1.0 / 3, 1e-15);
}

TEST(Krr, FitErrors) {
  EXPECT_THROW(krr_fit(Kernel::linear(), 1.0, Sequence{}), InvalidArgument);
  Sequence one;
  one.push_back(sig({1}), 1.0);
  EXPECT_THROW(krr_fit(Kernel::linear(), 0.0, one), InvalidArgument);
  const Kernel neg = Kernel::custom("neg", [](const Signal&, const Signal&) { return -5.0; });
  EXPECT_THROW(krr_fit(neg, 1.0, one), NumericFailure);
}

TEST(Krr, PredictCases) {
  const std::vector anchors{sig({1})};
  EXPECT_EQ(krr_predict(Vector::Constant(1, 0.5), anchors, Kernel::linear(), sig({1})), 0.5);
  EXPECT_EQ(krr_predict(Vector::Zero(1), anchors, Kernel::gaussian(1.0), sig({3})), 0.0);
  EXPECT_EQ(krr_predict(Vector::Constant(1, 2.0), std::vector{sig({1, 0})}, Kernel::linear(), sig({0, 5})), 0.0);
  EXPECT_THROW(krr_predict(Vector::Zero(2), anchors, Kernel::linear(), sig({1})), DimensionMismatch);
}

TEST(RrPrequential, Cases) {
  EXPECT_EQ(rr_prequential_predict(Kernel::linear(), 1.0, Sequence{}, sig({1})), 0.0);
  Sequence one;
  one.push_back(sig({1}), 1.0);
  EXPECT_NEAR(rr_prequential_predict(Kernel::linear(), 1.0, one, sig({1})), 0.5, 1e-15);
  EXPECT_NEAR(rr_prequential_predict(half_overlap_kernel(), 1.0, one, sig({2})), 0.25, 1e-15);
}

TEST(RidgePredictor, MatchesBatchRefitEachStep) {
  checks::Rng rng(12);
  const Sequence s = checks::random_sequence(rng, 30, 2, 1.0);
  const Kernel k = Kernel::gaussian(0.8);
  RidgePredictor rr(k, 0.5);
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double expected = rr_prequential_predict(k, 0.5, s.prefix(t), s.signals[t]);
    EXPECT_NEAR(rr.update(s.signals[t], s.outcomes[t]).prediction, expected, 1e-10);
  }
}

TEST(KaarDirect, MatchesWorkedCase) {
  Sequence one;
  one.push_back(sig({1}), 1.0);
  EXPECT_NEAR(kaar_predict_direct(Kernel::linear(), 1.0, one, sig({1})), 1.0 / 3, 1e-15);
  EXPECT_EQ(kaar_predict_direct(Kernel::linear(), 1.0, Sequence{}, sig({1})), 0.0);
}

TEST(Oblivious, Cases) {
  ObliviousPredictor empty{Kernel::linear(), {}, {}};
  EXPECT_EQ(oblivious_predict(empty, sig({4})), 0.0);

  ObliviousPredictor unit{Kernel::linear(), {1.0}, {sig({1})}};
  EXPECT_EQ(oblivious_predict(unit, sig({1})), 1.0);

  ObliviousPredictor half{Kernel::linear(), {0.5}, {sig({1})}};
  Sequence s;
  s.push_back(sig({1}), 1.0);
  EXPECT_EQ(sequence_loss(half, s), 0.25);
}

TEST(TrialLoss, TotalIsOrderedSum) {
  std::vector<TrialRecord> trials(3);
  trials[0].loss = 0.1;
  trials[1].loss = 0.2;
  trials[2].loss = 0.3;
  EXPECT_EQ(total_loss(trials), (0.1 + 0.2) + 0.3);
}

TEST(Clip, ClampsToBound) {
  EXPECT_EQ(clip_prediction(2.0, 1.0), 1.0);
  EXPECT_EQ(clip_prediction(-2.0, 1.0), -1.0);
  EXPECT_EQ(clip_prediction(0.3, 1.0), 0.3);
}

}  // namespace
}  // namespace kaar
