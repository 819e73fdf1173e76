#include "kaar/kernel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "kaar/error.hpp"

namespace kaar {

namespace {

bool lexicographically_less(const Signal& a, const Signal& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

double integer_power(double base, int exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, std::string_view whole) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidArgument("invalid number '" + std::string(text) + "' in kernel '" +
                          std::string(whole) + "'");
  }
  return value;
}

}  // namespace

void check_signal(const Signal& x) {
  if (!x.allFinite()) throw InvalidArgument("signal has a non-finite coordinate");
}

void Sequence::push_back(Signal x, double y) {
  signals.push_back(std::move(x));
  outcomes.push_back(y);
}

Vector Sequence::outcome_vector() const {
  return Eigen::Map<const Vector>(outcomes.data(), static_cast<Eigen::Index>(outcomes.size()));
}

Sequence Sequence::prefix(std::size_t count) const {
  count = std::min(count, size());
  Sequence out;
  out.signals.assign(signals.begin(), signals.begin() + static_cast<std::ptrdiff_t>(count));
  out.outcomes.assign(outcomes.begin(), outcomes.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

Kernel Kernel::linear() { return Kernel(LinearKernel{}); }

Kernel Kernel::polynomial(int degree, double offset) {
  if (degree < 1) throw InvalidArgument("polynomial kernel degree must be >= 1");
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw InvalidArgument("polynomial kernel offset must be finite and >= 0");
  }
  return Kernel(PolynomialKernel{degree, offset});
}

Kernel Kernel::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidArgument("gaussian kernel width must be finite and > 0");
  }
  return Kernel(GaussianKernel{width});
}

Kernel Kernel::custom(std::string name, std::function<double(const Signal&, const Signal&)> fn) {
  if (!fn) throw InvalidArgument("custom kernel needs a function");
  return Kernel(CustomKernel{std::move(name), std::move(fn)});
}

double Kernel::operator()(const Signal& x1, const Signal& x2) const {
  if (x1.size() != x2.size()) {
    throw DimensionMismatch("kernel arguments have dimensions " + std::to_string(x1.size()) +
                            " and " + std::to_string(x2.size()));
  }
  const double value =
      lexicographically_less(x2, x1) ? evaluate(x2, x1) : evaluate(x1, x2);
  if (!std::isfinite(value)) throw NumericFailure("kernel " + to_string() + " returned a non-finite value");
  return value;
}

double Kernel::evaluate(const Signal& x1, const Signal& x2) const {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          return x1.dot(x2);
        } else if constexpr (std::is_same_v<K, PolynomialKernel>) {
          return integer_power(k.offset + x1.dot(x2), k.degree);
        } else if constexpr (std::is_same_v<K, GaussianKernel>) {
          return std::exp(-(x1 - x2).squaredNorm() / (2.0 * k.width * k.width));
        } else {
          return k.fn(x1, x2);
        }
      },
      family_);
}

std::string Kernel::to_string() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          return "linear";
        } else if constexpr (std::is_same_v<K, PolynomialKernel>) {
          std::string s = "poly:" + std::to_string(k.degree);
          if (k.offset != 1.0) s += ":" + format_double(k.offset);
          return s;
        } else if constexpr (std::is_same_v<K, GaussianKernel>) {
          return "rbf:" + format_double(k.width);
        } else {
          return "custom:" + k.name;
        }
      },
      family_);
}

Kernel parse_kernel(std::string_view text) {
  const auto parts = split(text, ':');
  const auto& head = parts.front();
  if (head == "linear" && parts.size() == 1) return Kernel::linear();
  if (head == "poly" && (parts.size() == 2 || parts.size() == 3)) {
    const int degree = parse_number<int>(parts[1], text);
    const double offset = parts.size() == 3 ? parse_number<double>(parts[2], text) : 1.0;
    return Kernel::polynomial(degree, offset);
  }
  if (head == "rbf" && parts.size() == 2) {
    return Kernel::gaussian(parse_number<double>(parts[1], text));
  }
  throw InvalidArgument("unknown kernel '" + std::string(text) +
                        "' (expected linear, poly:<m>[:<offset>] or rbf:<width>)");
}

Matrix gram_entries(const Kernel& kernel, std::span<const Signal> points) {
  const auto t = static_cast<Eigen::Index>(points.size());
  Matrix k(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i; j < t; ++j) {
      k(i, j) = kernel(points[i], points[j]);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

GramMatrix::GramMatrix(const Kernel& kernel, std::span<const Signal> points)
    : points_(points.begin(), points.end()), entries_(gram_entries(kernel, points)) {}

GramMatrix gram(const Kernel& kernel, std::span<const Signal> points) {
  if (points.empty()) throw InvalidArgument("gram: empty point list");
  return GramMatrix(kernel, points);
}

Vector kernel_column(const Kernel& kernel, std::span<const Signal> points, const Signal& x) {
  Vector k(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) k[static_cast<Eigen::Index>(i)] = kernel(points[i], x);
  return k;
}

PsdCheck psd_spot_check(const Kernel& kernel, std::span<const Signal> sample, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("psd_spot_check: tol must be > 0");
  const GramMatrix g = gram(kernel, sample);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("psd_spot_check: eigen-solver did not converge");
  }
  const double min_eig = solver.eigenvalues().minCoeff();
  return PsdCheck{min_eig >= -tol, min_eig};
}

}  // namespace kaar
