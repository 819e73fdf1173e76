#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace kaar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of the signal space. All coordinates must be finite.
using Signal = Eigen::VectorXd;

/// Throws InvalidArgument if any coordinate is NaN or infinite.
void check_signal(const Signal& x);

/// An ordered sequence of (signal, outcome) pairs, in trial order.
struct Sequence {
  std::vector<Signal> signals;
  std::vector<double> outcomes;

  std::size_t size() const { return signals.size(); }
  bool empty() const { return signals.empty(); }
  void push_back(Signal x, double y);
  Vector outcome_vector() const;
  /// The first `count` pairs.
  Sequence prefix(std::size_t count) const;
};

struct LinearKernel {};

/// (offset + x'z)^degree
struct PolynomialKernel {
  int degree = 1;
  double offset = 1.0;
};

/// exp(-|x - z|^2 / (2 width^2))
struct GaussianKernel {
  double width = 1.0;
};

/// Arbitrary user function. It must be deterministic and is assumed, not
/// verified, to be a positive semidefinite kernel; psd_spot_check can
/// sample it.
struct CustomKernel {
  std::string name;
  std::function<double(const Signal&, const Signal&)> fn;
};

class Kernel {
 public:
  using Family = std::variant<LinearKernel, PolynomialKernel, GaussianKernel, CustomKernel>;

  static Kernel linear();
  static Kernel polynomial(int degree, double offset = 1.0);
  static Kernel gaussian(double width);
  static Kernel custom(std::string name, std::function<double(const Signal&, const Signal&)> fn);

  /// Kernel value. The arguments are put in a canonical order before
  /// evaluation so that k(x, z) and k(z, x) are bitwise equal.
  double operator()(const Signal& x1, const Signal& x2) const;

  const Family& family() const { return family_; }
  bool is_linear() const { return std::holds_alternative<LinearKernel>(family_); }

  /// Round-trips through parse_kernel for the registered families.
  std::string to_string() const;

 private:
  explicit Kernel(Family family) : family_(std::move(family)) {}
  double evaluate(const Signal& x1, const Signal& x2) const;

  Family family_;
};

/// Parses `linear`, `poly:<m>[:<offset>]` or `rbf:<width>`.
Kernel parse_kernel(std::string_view text);

/// Immutable t x t matrix of kernel values over a list of points.
class GramMatrix {
 public:
  GramMatrix(const Kernel& kernel, std::span<const Signal> points);

  const Matrix& entries() const { return entries_; }
  const std::vector<Signal>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Signal> points_;
  Matrix entries_;
};

/// Throws InvalidArgument on an empty point list.
GramMatrix gram(const Kernel& kernel, std::span<const Signal> points);

/// (k(p_1, x), ..., k(p_t, x))'
Vector kernel_column(const Kernel& kernel, std::span<const Signal> points, const Signal& x);

/// Gram matrix without the non-empty requirement (0 x 0 for no points).
Matrix gram_entries(const Kernel& kernel, std::span<const Signal> points);

struct PsdCheck {
  bool pass = false;
  double min_eigenvalue = 0.0;
};

/// Smallest eigenvalue of the sample Gram matrix, and whether it is >= -tol.
/// This samples condition (ii) of a kernel on the given points; it is not a
/// proof of positive semidefiniteness.
PsdCheck psd_spot_check(const Kernel& kernel, std::span<const Signal> sample, double tol);

}  // namespace kaar
