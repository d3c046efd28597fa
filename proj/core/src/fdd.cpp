#include "rrtlab/fdd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rrtlab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_bound(std::string_view s) {
  s = trim(s);
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad interval bound '" + std::string(s) + "'");
  }
}

Interval parse_interval(std::string_view s) {
  s = trim(s);
  if (s == "R") return Interval::real_line();
  if (s.size() < 5 || s.front() != '(')
    throw std::invalid_argument("bad interval '" + std::string(s) + "'");
  const char close = s.back();
  const auto comma = s.find(',');
  if (comma == std::string_view::npos)
    throw std::invalid_argument("bad interval '" + std::string(s) + "'");
  Interval iv{parse_bound(s.substr(1, comma - 1)),
              parse_bound(s.substr(comma + 1, s.size() - comma - 2))};
  // Finite right ends are closed, infinite ones open.
  if (std::isinf(iv.upper) ? close != ')' : close != ']')
    throw std::invalid_argument("bad interval bracket in '" + std::string(s) + "'");
  if (std::isinf(iv.lower) && iv.lower > 0)
    throw std::invalid_argument("lower bound cannot be +inf");
  return iv;
}

}  // namespace

std::string Interval::to_string() const {
  std::ostringstream out;
  out << '(';
  if (std::isinf(lower)) out << "-inf"; else out << lower;
  out << ',';
  if (std::isinf(upper)) out << "inf)"; else out << upper << ']';
  return out.str();
}

CanonicalFdd::CanonicalFdd(std::vector<FddEntry> entries) : entries_(std::move(entries)) {
  std::size_t k = 0;
  while (k < entries_.size() && !entries_[k].tail) ++k;
  exact_count_ = k;
  for (std::size_t i = k; i < entries_.size(); ++i)
    if (!entries_[i].tail) throw std::invalid_argument("exact entries must precede tail entries");

  for (const auto& e : entries_)
    if (!(e.interval.lower < e.interval.upper))
      throw std::invalid_argument("empty interval " + e.interval.to_string());

  for (std::size_t i = 1; i < exact_count_; ++i)
    if (entries_[i].level < entries_[i - 1].level)
      throw std::invalid_argument("exact levels must be nondecreasing");
  if (exact_count_ < entries_.size()) {
    const std::int32_t tail_level = entries_[exact_count_].level;
    for (std::size_t i = exact_count_; i < entries_.size(); ++i)
      if (entries_[i].level != tail_level)
        throw std::invalid_argument("tail entries must share one level");
    if (exact_count_ > 0 && entries_[exact_count_ - 1].level >= tail_level)
      throw std::invalid_argument("exact levels must lie strictly below the tail level");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      if (entries_[i].level == entries_[j].level &&
          !entries_[i].interval.disjoint(entries_[j].interval))
        throw std::invalid_argument("intervals at level " + std::to_string(entries_[i].level) +
                                    " overlap");
}

CanonicalFdd CanonicalFdd::parse(std::string_view spec) {
  std::vector<FddEntry> entries;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view item = trim(spec.substr(start, end - start));
    if (item.empty()) throw std::invalid_argument("empty FDD item");
    FddEntry e;
    if (item.substr(0, 2) == ">=") {
      e.tail = true;
      item.remove_prefix(2);
    }
    const auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw std::invalid_argument("FDD item needs 'level:interval': " + std::string(item));
    const auto level_text = trim(item.substr(0, colon));
    const auto* first = level_text.data();
    const auto* last = first + level_text.size();
    if (!level_text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e.level);
    if (ec != std::errc() || ptr != last)
      throw std::invalid_argument("bad FDD level '" + std::string(level_text) + "'");
    e.interval = parse_interval(item.substr(colon + 1));
    entries.push_back(e);
  };
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const char c = spec[i];
    if (c == '(' || c == '[') ++depth;
    else if (c == ')' || c == ']') --depth;
    else if (c == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
    if (depth < 0) throw std::invalid_argument("unbalanced brackets in FDD spec");
  }
  if (depth != 0) throw std::invalid_argument("unbalanced brackets in FDD spec");
  flush(spec.size());
  return CanonicalFdd(std::move(entries));
}

std::int32_t CanonicalFdd::min_level() const {
  std::int32_t m = std::numeric_limits<std::int32_t>::max();
  for (const auto& e : entries_) m = std::min(m, e.level);
  return m;
}

std::string CanonicalFdd::to_string() const {
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += ',';
    if (e.tail) out += ">=";
    out += std::to_string(e.level) + ':' + e.interval.to_string();
  }
  return out;
}

}  // namespace rrtlab
