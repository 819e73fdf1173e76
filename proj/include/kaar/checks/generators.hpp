#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kaar/kernel.hpp"
#include "kaar/predictors.hpp"

namespace kaar::checks {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

/// Coordinates uniform in [-scale, scale].
Signal random_signal(Rng& rng, Eigen::Index n, double scale = 1.0);
Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale);

/// The registered families exercised by randomized checks: linear, poly:2,
/// poly:3 and rbf with a random width.
Kernel random_registered_kernel(Rng& rng);
std::vector<Kernel> registered_kernels();

/// One of 0.1, 1, 10.
double random_ridge(Rng& rng);

/// T trials in dimension n with |y_t| <= y_bound. Outcomes are a clamped
/// random smooth target plus noise, or (one time in three) pure noise.
Sequence random_sequence(Rng& rng, std::size_t length, Eigen::Index n, double y_bound);

/// Oblivious predictor with random anchors (not data points) and coefficients.
ObliviousPredictor random_oblivious(Rng& rng, const Kernel& kernel, Eigen::Index n);

}  // namespace kaar::checks
