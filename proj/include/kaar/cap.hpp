#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kaar/kernel.hpp"

namespace kaar {

/// Kernel family indexed by a positive integer, m -> K_m.
using KernelFamily = std::function<Kernel(int)>;

/// m -> (offset + x'z)^m
KernelFamily polynomial_family(double offset = 1.0);

/// Upper bound on the prefix complexity of m (up to an additive constant),
/// in bits: p(1) = 0, p(m) = log2 m + 2 log2 max(log2 m, 1).
double prefix_complexity_bits(int m);

/// (2 Y^2 ln 2) * prefix_complexity_bits(m). Throws for m < 1.
double complexity_penalty(int m, double y_bound);

/// Human-readable statement of the penalty convention, echoed in reports.
inline constexpr const char* kPenaltyConvention =
    "penalty = 2 Y^2 ln2 * p(m); p(1) = 0, p(m) = log2(m) + 2 log2(max(log2(m), 1)) for m >= 2; "
    "additive constant dropped";

/// Score of model m. total = rr_loss + logdet_term + complexity_penalty.
struct CapScore {
  int m = 1;
  double rr_loss = 0.0;              // batch ridge regression, fit and evaluated on all of S
  double prequential_rr_loss = 0.0;  // online ridge regression, reported only
  double logdet_term = 0.0;          // Y^2 ln det(I + K_m / a)
  double complexity_penalty = 0.0;
  double total = 0.0;
};

CapScore cap_score(int m, const Sequence& data, const KernelFamily& family, double ridge,
                   double y_bound);

struct CapSelection {
  int best_m = 1;
  std::vector<CapScore> scores;  // sorted by total, ties toward smaller m
};

/// Scores every m in [m_min, m_max] (candidates are evaluated concurrently)
/// and picks the smallest total; ties go to the smaller m.
CapSelection cap_select(const Sequence& data, const KernelFamily& family, int m_min, int m_max,
                        double ridge, double y_bound);

/// Orders precomputed scores and picks the winner.
CapSelection select_from(std::vector<CapScore> scores);

nlohmann::json to_json(const CapScore& score);
nlohmann::json to_json(const CapSelection& selection);

}  // namespace kaar
