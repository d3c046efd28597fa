#include "rrtlab/records.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "rrtlab/oracle.hpp"

namespace rrtlab {
namespace {

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

RecordFormat parse_record_format(std::string_view text) {
  if (text == "csv") return RecordFormat::kCsv;
  if (text == "jsonl") return RecordFormat::kJsonLines;
  throw std::invalid_argument("unknown record format '" + std::string(text) + "'");
}

RecordWriter::RecordWriter(std::ostream& out, RecordFormat format) : out_(out), format_(format) {
  if (format_ == RecordFormat::kCsv) out_ << "schema,replicate,n,seed,observable,value\n";
}

void RecordWriter::write(std::uint64_t replicate, std::uint64_t n, std::uint64_t seed,
                         std::string_view observable, double value) {
  if (format_ == RecordFormat::kCsv) {
    out_ << kSchema << ',' << replicate << ',' << n << ',' << seed << ',' << observable << ','
         << format_double(value) << '\n';
  } else {
    // Keys are emitted by hand to keep the column order stable.
    out_ << "{\"schema\":\"" << kSchema << "\",\"replicate\":" << replicate << ",\"n\":" << n
         << ",\"seed\":" << seed << ",\"observable\":" << nlohmann::json(observable).dump()
         << ",\"value\":" << format_double(value) << "}\n";
  }
  if (!out_) throw std::runtime_error("write failed");
  ++rows_;
}

std::string golden_document(std::uint32_t max_n) {
  if (max_n < 1 || max_n > 6) throw std::invalid_argument("golden_document supports 1 <= max_n <= 6");
  nlohmann::ordered_json doc;
  doc["schema"] = kSchema;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    nlohmann::ordered_json e;
    e["n"] = n;
    e["chains"] = factorial(n) * factorial(n - 1);
    e["increasing_trees"] = factorial(n - 1);
    if (n <= 5) {
      const auto rep = verify_phi(n);
      e["fiber_min"] = rep.min_fiber;
      e["fiber_max"] = rep.max_fiber;
    }
    nlohmann::ordered_json law = nlohmann::ordered_json::array();
    for (const auto& [key, p] : exact_degree_depth_law(n, 1))
      law.push_back({{"degree", key.degree}, {"depth", key.depth}, {"p", p.to_string()}});
    e["degree_depth_vertex1"] = law;
    nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
    for (const auto& [s, p] : selection_size_law(n))
      sizes.push_back({{"size", s}, {"p", p.to_string()}});
    e["selection_size"] = sizes;
    entries.push_back(e);
  }
  doc["laws"] = entries;
  return doc.dump(2) + "\n";
}

}  // namespace rrtlab
