#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "rrtlab/records.hpp"

using namespace rrtlab;

TEST(Records, CsvLayout) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::kCsv);
  w.write(0, 1024, 7, "depth", 3);
  w.write(1, 1024, 7, "depth", 0.1);
  EXPECT_EQ(out.str(),
            "schema,replicate,n,seed,observable,value\n"
            "rrtlab.records/1,0,1024,7,depth,3\n"
            "rrtlab.records/1,1,1024,7,depth,0.1\n");
  EXPECT_EQ(w.rows(), 2u);
}

TEST(Records, JsonLinesCarrySchema) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::kJsonLines);
  w.write(3, 8, 1, "selection_size[2]", 2.5);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["schema"], "rrtlab.records/1");
  EXPECT_EQ(j["replicate"], 3);
  EXPECT_EQ(j["observable"], "selection_size[2]");
  EXPECT_EQ(j["value"], 2.5);
  EXPECT_EQ(out.str().find("{\"schema\""), 0u);
}

TEST(Records, FormatParsing) {
  EXPECT_EQ(parse_record_format("csv"), RecordFormat::kCsv);
  EXPECT_EQ(parse_record_format("jsonl"), RecordFormat::kJsonLines);
  EXPECT_THROW(parse_record_format("xml"), std::invalid_argument);
}

TEST(Records, DoublesRoundTrip) {
  std::ostringstream out;
  RecordWriter w(out, RecordFormat::kJsonLines);
  const double v = 0.1 + 0.2;
  w.write(0, 1, 1, "x", v);
  EXPECT_EQ(nlohmann::json::parse(out.str())["value"].get<double>(), v);
}
