#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace rrtlab {

/// Half-open interval (lower, upper]; lower may be -inf, upper may be +inf.
/// Covers the three shapes (-inf,b], (a,b] and (a,inf) plus the whole line.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static Interval real_line() { return {}; }
  static Interval at_most(double b) { return {-std::numeric_limits<double>::infinity(), b}; }
  static Interval above(double a) { return {a, std::numeric_limits<double>::infinity()}; }

  bool contains(double z) const { return z > lower && z <= upper; }
  bool disjoint(const Interval& other) const {
    return upper <= other.lower || other.upper <= lower;
  }
  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// One (level, interval) pair. Exact entries count vertices with degree equal
/// to floor(log2 n) + level, tail entries those with degree at least that.
struct FddEntry {
  std::int32_t level = 0;
  Interval interval;
  bool tail = false;
};

/// Canonical sequence: exact entries with nondecreasing levels, all strictly
/// below a common tail level; entries at the same level have disjoint
/// intervals. Either part may be empty.
class CanonicalFdd {
 public:
  CanonicalFdd() = default;
  /// Throws std::invalid_argument when the entries are not canonical.
  explicit CanonicalFdd(std::vector<FddEntry> entries);

  /// Parses "j:interval" items separated by commas, tail items prefixed with
  /// ">=". Intervals are written "(a,b]", "(-inf,b]", "(a,inf)" or "R".
  /// Example: "-1:(-inf,0],-1:(0,inf),>=0:R".
  static CanonicalFdd parse(std::string_view spec);

  const std::vector<FddEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t exact_count() const { return exact_count_; }
  std::int32_t min_level() const;
  std::string to_string() const;

 private:
  std::vector<FddEntry> entries_;
  std::size_t exact_count_ = 0;
};

}  // namespace rrtlab
