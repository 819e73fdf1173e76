#include "kaar/checks/generators.hpp"

#include <algorithm>

namespace kaar::checks {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Signal random_signal(Rng& rng, Eigen::Index n, double scale) {
  Signal x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = uniform(rng, -scale, scale);
  return x;
}

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(rng, -scale, scale);
  }
  return m;
}

std::vector<Kernel> registered_kernels() {
  return {Kernel::linear(), Kernel::polynomial(2), Kernel::polynomial(3), Kernel::gaussian(1.0)};
}

Kernel random_registered_kernel(Rng& rng) {
  switch (uniform_int(rng, 0, 3)) {
    case 0: return Kernel::linear();
    case 1: return Kernel::polynomial(2);
    case 2: return Kernel::polynomial(3);
    default: return Kernel::gaussian(uniform(rng, 0.3, 3.0));
  }
}

double random_ridge(Rng& rng) {
  constexpr double ridges[] = {0.1, 1.0, 10.0};
  return ridges[uniform_int(rng, 0, 2)];
}

Sequence random_sequence(Rng& rng, std::size_t length, Eigen::Index n, double y_bound) {
  const bool pure_noise = uniform_int(rng, 0, 2) == 0;
  const Kernel target_kernel = Kernel::gaussian(uniform(rng, 0.5, 2.0));
  ObliviousPredictor target = random_oblivious(rng, target_kernel, n);
  const double noise = uniform(rng, 0.0, 0.3) * y_bound;

  Sequence s;
  for (std::size_t t = 0; t < length; ++t) {
    Signal x = random_signal(rng, n);
    double y = pure_noise ? uniform(rng, -y_bound, y_bound)
                          : target(x) * y_bound + noise * uniform(rng, -1.0, 1.0);
    s.push_back(std::move(x), std::clamp(y, -y_bound, y_bound));
  }
  return s;
}

ObliviousPredictor random_oblivious(Rng& rng, const Kernel& kernel, Eigen::Index n) {
  ObliviousPredictor p{kernel, {}, {}};
  const int count = uniform_int(rng, 1, 6);
  for (int i = 0; i < count; ++i) {
    p.anchors.push_back(random_signal(rng, n, 1.5));
    p.coefficients.push_back(uniform(rng, -1.0, 1.0));
  }
  return p;
}

}  // namespace kaar::checks
