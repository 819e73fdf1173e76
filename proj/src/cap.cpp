#include "kaar/cap.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "kaar/bounds.hpp"
#include "kaar/error.hpp"
#include "kaar/predictors.hpp"

namespace kaar {

KernelFamily polynomial_family(double offset) {
  return [offset](int m) { return Kernel::polynomial(m, offset); };
}

double prefix_complexity_bits(int m) {
  if (m < 1) throw InvalidArgument("model index must be >= 1");
  if (m == 1) return 0.0;
  const double lg = std::log2(static_cast<double>(m));
  return lg + 2.0 * std::log2(std::max(lg, 1.0));
}

double complexity_penalty(int m, double y_bound) {
  return 2.0 * y_bound * y_bound * std::numbers::ln2 * prefix_complexity_bits(m);
}

CapScore cap_score(int m, const Sequence& data, const KernelFamily& family, double ridge,
                   double y_bound) {
  if (!(ridge > 0.0)) throw InvalidArgument("ridge must be > 0");
  if (!(y_bound > 0.0)) throw InvalidArgument("Y must be > 0");
  const Kernel kernel = family(m);

  CapScore s;
  s.m = m;
  if (!data.empty()) {
    const Vector c = krr_fit(kernel, ridge, data);
    const Vector fitted = gram_entries(kernel, data.signals) * c;
    s.rr_loss = (fitted - data.outcome_vector()).squaredNorm();

    RidgePredictor online(kernel, ridge);
    for (std::size_t t = 0; t < data.size(); ++t) online.update(data.signals[t], data.outcomes[t]);
    s.prequential_rr_loss = online.cumulative_loss();
  }
  s.logdet_term = logdet_term(kernel, ridge, data.signals, y_bound);
  s.complexity_penalty = complexity_penalty(m, y_bound);
  s.total = s.rr_loss + s.logdet_term + s.complexity_penalty;
  return s;
}

CapSelection cap_select(const Sequence& data, const KernelFamily& family, int m_min, int m_max,
                        double ridge, double y_bound) {
  if (m_min < 1 || m_max < m_min) throw InvalidArgument("empty or invalid model range");

  std::vector<std::future<CapScore>> pending;
  for (int m = m_min; m <= m_max; ++m) {
    pending.push_back(std::async(std::launch::async, [&, m] {
      return cap_score(m, data, family, ridge, y_bound);
    }));
  }
  std::vector<CapScore> scores;
  for (auto& f : pending) scores.push_back(f.get());
  return select_from(std::move(scores));
}

CapSelection select_from(std::vector<CapScore> scores) {
  if (scores.empty()) throw InvalidArgument("no candidate scores");
  std::sort(scores.begin(), scores.end(), [](const CapScore& a, const CapScore& b) {
    if (a.total != b.total) return a.total < b.total;
    return a.m < b.m;
  });
  CapSelection sel;
  sel.best_m = scores.front().m;
  sel.scores = std::move(scores);
  return sel;
}

nlohmann::json to_json(const CapScore& score) {
  return nlohmann::json{{"m", score.m},
                        {"rr_loss", score.rr_loss},
                        {"prequential_rr_loss", score.prequential_rr_loss},
                        {"logdet_term", score.logdet_term},
                        {"complexity_penalty", score.complexity_penalty},
                        {"total", score.total}};
}

nlohmann::json to_json(const CapSelection& selection) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& s : selection.scores) scores.push_back(to_json(s));
  return nlohmann::json{{"selected_m", selection.best_m},
                        {"penalty_convention", kPenaltyConvention},
                        {"scores", scores}};
}

}  // namespace kaar
