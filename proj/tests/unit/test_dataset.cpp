#include <sstream>

#include <gtest/gtest.h>

#include "kaar/dataset.hpp"
#include "kaar/error.hpp"

namespace kaar {
namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in, "mem");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(Csv, ReadsRowsInOrder) {
  const Dataset ds = parse("x1,x2,y\n1,2,0.5\n-3,4e-1,+1\n");
  EXPECT_EQ(ds.dimension, 2);
  ASSERT_EQ(ds.trials.size(), 2u);
  EXPECT_EQ(ds.trials.signals[1][0], -3.0);
  EXPECT_EQ(ds.trials.signals[1][1], 0.4);
  EXPECT_EQ(ds.trials.outcomes[0], 0.5);
  EXPECT_EQ(ds.trials.outcomes[1], 1.0);
}

TEST(Csv, ColumnsInAnyOrderWithCrlfAndBom) {
  const Dataset ds = parse("\xEF\xBB\xBFy, x2 ,x1\r\n1,20,10\r\n\r\n2,40,30\r\n");
  ASSERT_EQ(ds.trials.size(), 2u);
  EXPECT_EQ(ds.trials.signals[0][0], 10.0);
  EXPECT_EQ(ds.trials.signals[0][1], 20.0);
  EXPECT_EQ(ds.trials.outcomes[1], 2.0);
}

TEST(Csv, HeaderOnlyIsEmpty) {
  const Dataset ds = parse("x1,y\n");
  EXPECT_TRUE(ds.trials.empty());
  EXPECT_EQ(ds.dimension, 1);
}

TEST(Csv, HeaderErrors) {
  EXPECT_NE(parse_error("").find("missing header"), std::string::npos);
  EXPECT_NE(parse_error("x1,x2\n1,2\n").find("missing 'y'"), std::string::npos);
  EXPECT_NE(parse_error("x1,x3,y\n").find("x2 is missing"), std::string::npos);
  EXPECT_NE(parse_error("x1,x1,y\n").find("duplicate"), std::string::npos);
  EXPECT_NE(parse_error("x1,y,y\n").find("duplicate"), std::string::npos);
  EXPECT_NE(parse_error("x1,z,y\n").find("unexpected column 'z'"), std::string::npos);
  EXPECT_NE(parse_error("y\n1\n").find("no signal columns"), std::string::npos);
}

TEST(Csv, RowErrorsCarryLineNumbers) {
  EXPECT_NE(parse_error("x1,y\n1,2\n3\n").find("mem: line 3: expected 2 cells, found 1"), std::string::npos);
  EXPECT_NE(parse_error("x1,y\n1,2\n\n1,2,3\n").find("line 4"), std::string::npos);
  EXPECT_NE(parse_error("x1,y\nabc,1\n").find("line 2: non-numeric value 'abc'"), std::string::npos);
  EXPECT_NE(parse_error("x1,y\n1,\n").find("non-numeric"), std::string::npos);
  EXPECT_NE(parse_error("x1,y\n1,2x\n").find("non-numeric"), std::string::npos);
  for (const char* bad : {"NaN", "nan", "inf", "-inf", "1e400"}) {
    const std::string msg = parse_error(std::string("x1,y\n1,1\n2,") + bad + "\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << bad << ": " << msg;
  }
}

TEST(Csv, StreamingReaderStopsAtFirstBadRow) {
  std::istringstream in("x1,y\n1,1\noops,2\n");
  CsvTrialReader reader(in, "stream");
  auto first = reader.next();
  ASSERT_TRUE(first);
  EXPECT_EQ(first->line, 2u);
  EXPECT_THROW(reader.next(), ParseError);
}

TEST(Csv, MissingFile) {
  EXPECT_THROW(parse_dataset(std::filesystem::path("/nonexistent/data.csv")), ParseError);
}

TEST(Csv, SampleDataFile) {
  const Dataset ds = parse_dataset(std::filesystem::path(KAAR_TEST_DATA_DIR) / "sine.csv");
  EXPECT_EQ(ds.dimension, 2);
  EXPECT_EQ(ds.trials.size(), 60u);
  for (double y : ds.trials.outcomes) EXPECT_LE(std::abs(y), 1.0);
}

}  // namespace
}  // namespace kaar
