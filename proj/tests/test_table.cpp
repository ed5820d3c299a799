#include <gtest/gtest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nosignal/table.hpp"

using namespace nosignal;

TEST(FormatDouble, SeventeenSignificantDigitsRoundTrip) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-1e-20), "-9.9999999999999995e-21");
  for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, -6.02e23, 5e-324}) {
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    EXPECT_EQ(back, v) << text;
  }
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Table, CsvHasHeaderAndStableRows) {
  Table t{{"alpha", "outcome", "index"}, {}};
  t.add_row({0.5, std::string("HV"), std::int64_t{3}});
  t.add_row({1.0 / 3.0, std::string("VV"), std::int64_t{4}});
  EXPECT_EQ(render_csv(t), "alpha,outcome,index\n0.5,HV,3\n0.33333333333333331,VV,4\n");
  EXPECT_THROW(t.add_row({1.0}), InvalidArgument);

  Table q{{"label"}, {}};
  q.add_row({std::string("E(a,b), \"primed\"")});
  EXPECT_EQ(render_csv(q), "label\n\"E(a,b), \"\"primed\"\"\"\n");
}

TEST(Table, JsonDocument) {
  Table t{{"x", "y"}, {}};
  t.add_row({1.5, std::nan("")});
  const auto doc = nlohmann::json::parse(render_json(t));
  EXPECT_EQ(doc["columns"], nlohmann::json::array({"x", "y"}));
  EXPECT_EQ(doc["rows"][0][0].get<double>(), 1.5);
  EXPECT_TRUE(doc["rows"][0][1].is_null());
}

TEST(Table, EmitWritesFileAndReportsFailures) {
  Table t{{"a"}, {}};
  t.add_row({2.0});
  const auto path = std::filesystem::temp_directory_path() / "nosignal_table_test.csv";
  emit_table(t, Format::Csv, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a\n2\n");
  std::filesystem::remove(path);

  try {
    emit_table(t, Format::Json, "/nonexistent-dir/out.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), "/nonexistent-dir/out.json");
    EXPECT_NE(std::string(e.what()).find("No such file"), std::string::npos);
  }
}

TEST(Table, FormatNames) {
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}
