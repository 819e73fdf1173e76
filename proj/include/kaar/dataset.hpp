#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kaar/kernel.hpp"

namespace kaar {

/// Trials in protocol order, all signals of the same dimension.
struct Dataset {
  Eigen::Index dimension = 0;
  Sequence trials;
};

struct CsvRow {
  Signal signal;
  double outcome = 0.0;
  std::size_t line = 0;
};

/// Reads `x1,...,xn,y` CSV one row at a time. Columns may appear in any
/// order; x columns must be numbered 1..n without gaps and y is required.
/// Errors carry the offending line number (the header is line 1).
class CsvTrialReader {
 public:
  explicit CsvTrialReader(std::istream& in, std::string source = "<input>");

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(x_columns_.size()); }

  /// Next data row, or nullopt at end of input. Blank lines are skipped.
  std::optional<CsvRow> next();

 private:
  [[noreturn]] void fail(const std::string& what) const;

  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
  std::size_t column_count_ = 0;
  std::vector<std::size_t> x_columns_;  // column index of x1, x2, ...
  std::size_t y_column_ = 0;
};

Dataset parse_dataset(std::istream& in, std::string source = "<input>");
Dataset parse_dataset(const std::filesystem::path& path);

}  // namespace kaar
