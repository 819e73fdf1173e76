#include "kaar/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <system_error>

#include "kaar/error.hpp"

namespace kaar {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return cells;
    start = pos + 1;
  }
}

}  // namespace

CsvTrialReader::CsvTrialReader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {
  std::string header;
  if (!std::getline(in_, header)) fail("missing header row");
  ++line_;
  if (header.starts_with("\xEF\xBB\xBF")) header.erase(0, 3);

  const auto names = split_cells(header);
  column_count_ = names.size();
  std::map<int, std::size_t> x_by_number;
  std::optional<std::size_t> y;
  for (std::size_t col = 0; col < names.size(); ++col) {
    const auto name = names[col];
    if (name == "y") {
      if (y) fail("duplicate column 'y'");
      y = col;
      continue;
    }
    int number = 0;
    if (name.size() > 1 && name.front() == 'x') {
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), number);
      if (ec == std::errc() && ptr == name.data() + name.size() && number >= 1) {
        if (!x_by_number.emplace(number, col).second) fail("duplicate column '" + std::string(name) + "'");
        continue;
      }
    }
    fail("unexpected column '" + std::string(name) + "' (expected x1..xn and y)");
  }
  if (!y) fail("missing 'y' column");
  y_column_ = *y;
  int expected = 1;
  for (const auto& [number, col] : x_by_number) {
    if (number != expected) fail("signal columns must be x1..xn without gaps; x" + std::to_string(expected) + " is missing");
    x_columns_.push_back(col);
    ++expected;
  }
  if (x_columns_.empty()) fail("no signal columns (x1..xn)");
}

void CsvTrialReader::fail(const std::string& what) const {
  throw ParseError(source_ + ": line " + std::to_string(line_) + ": " + what);
}

std::optional<CsvRow> CsvTrialReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (trim(text).empty()) continue;

    const auto cells = split_cells(text);
    if (cells.size() != column_count_) {
      fail("expected " + std::to_string(column_count_) + " cells, found " + std::to_string(cells.size()));
    }
    auto number = [&](std::size_t col) {
      auto cell = cells[col];
      if (cell.size() > 1 && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail("non-numeric value '" + std::string(cell) + "' in column " + std::to_string(col + 1));
      }
      if (!std::isfinite(v)) {
        fail("non-finite value '" + std::string(cell) + "' in column " + std::to_string(col + 1));
      }
      return v;
    };

    CsvRow row;
    row.line = line_;
    row.signal.resize(dimension());
    for (std::size_t i = 0; i < x_columns_.size(); ++i) row.signal[static_cast<Eigen::Index>(i)] = number(x_columns_[i]);
    row.outcome = number(y_column_);
    return row;
  }
  return std::nullopt;
}

Dataset parse_dataset(std::istream& in, std::string source) {
  CsvTrialReader reader(in, std::move(source));
  Dataset ds;
  ds.dimension = reader.dimension();
  while (auto row = reader.next()) ds.trials.push_back(std::move(row->signal), row->outcome);
  return ds;
}

Dataset parse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_dataset(in, path.string());
}

}  // namespace kaar
