#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace rrtlab {

/// Version tag written into every JSON document and record.
inline constexpr std::string_view kSchema = "rrtlab.records/1";

enum class RecordFormat { kCsv, kJsonLines };

/// Parses "csv" or "jsonl"; throws std::invalid_argument otherwise.
RecordFormat parse_record_format(std::string_view text);

/// Row-oriented observable records. Columns, in this order:
///   schema, replicate, n, seed, observable, value
/// CSV output starts with a header line; JSON lines carry the same keys.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, RecordFormat format);

  void write(std::uint64_t replicate, std::uint64_t n, std::uint64_t seed,
             std::string_view observable, double value);

  std::uint64_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  RecordFormat format_;
  std::uint64_t rows_ = 0;
};

/// Exact oracle laws for n = 1..max_n (max_n <= 6) as a JSON document:
/// chain and tree counts, fiber sizes, and the joint (degree, depth) law of
/// vertex 1 with probabilities written as "num/den" strings.
std::string golden_document(std::uint32_t max_n);

}  // namespace rrtlab
