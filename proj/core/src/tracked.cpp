#include "rrtlab/tracked.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrtlab {

TrackedCoalescent::TrackedCoalescent(std::uint32_t n, std::uint32_t k, TrackedMode mode)
    : n_(n), k_(k), mode_(mode), degree_(k, 0), records_(k) {
  if (n == 0) throw std::invalid_argument("TrackedCoalescent: n must be positive");
  if (k == 0 || k > n) throw std::invalid_argument("TrackedCoalescent: need 1 <= k <= n");
  groups_.reserve(k);
}

void TrackedCoalescent::reset() {
  // Reuse member buffers; this runs once per trial in rejection loops.
  groups_.resize(k_);
  for (Label v = 1; v <= k_; ++v) {
    Group& g = groups_[v - 1];
    g.min_label = v;
    g.root = v;
    g.members.clear();
    g.members.push_back(v);
    degree_[v - 1] = 0;
    auto& r = records_[v - 1];
    r.vertex = v;
    r.n = n_;
    r.steps.clear();
    r.kappa_steps.clear();
  }
}

double TrackedCoalescent::survival(std::uint32_t i, std::uint32_t j, std::uint32_t c) {
  double s = 1.0;
  for (std::uint32_t t = 0; t < c; ++t) {
    const double num = (static_cast<double>(j) - t) * (static_cast<double>(j) - 1.0 - t);
    if (num <= 0.0) return 0.0;
    s *= num / ((static_cast<double>(i) - t) * (static_cast<double>(i) - 1.0 - t));
  }
  return s;
}

std::uint32_t TrackedCoalescent::next_event_step(std::uint32_t i, std::uint32_t c,
                                                 Rng& rng) const {
  // The event lands in [j, i] iff survival(i, j-1) < V, which is monotone in j.
  const double v = 1.0 - rng.uniform01();
  if (c == 1) {
    // survival(i, j-1, 1) = (j-1)(j-2) / (i(i-1)); invert the quadratic, then
    // settle rounding with the same comparison the search uses.
    const double w = v * static_cast<double>(i) * (static_cast<double>(i) - 1.0);
    auto j = static_cast<std::uint32_t>(std::clamp(
        std::floor((3.0 + std::sqrt(1.0 + 4.0 * w)) / 2.0), 2.0, static_cast<double>(i)));
    while (j < i && survival(i, j, 1) < v) ++j;
    while (j > 2 && !(survival(i, j - 1, 1) < v)) --j;
    return j;
  }
  std::uint32_t lo = std::max<std::uint32_t>(2, std::min(i, c + 1));  // always satisfied
  std::uint32_t hi = i;
  while (lo < hi) {
    const std::uint32_t mid = lo + (hi - lo + 1) / 2;
    if (survival(i, mid - 1, c) < v)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

bool TrackedCoalescent::demote(std::uint32_t step, Group& group) {
  for (Label v : group.members) records_[v - 1].kappa_steps.push_back(step);
  const Label old_root = group.root;
  group.root = kNoVertex;
  if (old_root != kNoVertex && !min_degree_.empty() &&
      degree_[old_root - 1] < min_degree_[old_root - 1])
    return false;
  return true;
}

bool TrackedCoalescent::merge_tracked_pair(std::uint32_t step, std::uint32_t a, std::uint32_t b,
                                           bool toward_a) {
  Group& ga = groups_[a - 1];
  Group& gb = groups_[b - 1];
  for (Label v : ga.members) records_[v - 1].steps.push_back(step);
  for (Label v : gb.members) records_[v - 1].steps.push_back(step);

  Group& winner = toward_a ? ga : gb;
  Group& loser = toward_a ? gb : ga;
  if (winner.root != kNoVertex) ++degree_[winner.root - 1];
  const Label new_root = winner.root;
  const bool ok = demote(step, loser);

  ga.root = new_root;
  ga.members.insert(ga.members.end(), gb.members.begin(), gb.members.end());
  groups_.erase(groups_.begin() + (b - 1));
  return ok;
}

bool TrackedCoalescent::merge_with_untracked(std::uint32_t step, std::uint32_t g, bool toward_g) {
  Group& group = groups_[g - 1];
  for (Label v : group.members) records_[v - 1].steps.push_back(step);
  if (toward_g) {
    if (group.root != kNoVertex) ++degree_[group.root - 1];
    return true;
  }
  return demote(step, group);
}

bool TrackedCoalescent::run(Rng& rng, std::span<const std::uint32_t> min_degree) {
  if (!min_degree.empty() && min_degree.size() != k_)
    throw std::invalid_argument("min_degree must have one entry per tracked vertex");
  min_degree_ = min_degree;
  reset();

  if (mode_ == TrackedMode::kStepwise) {
    for (std::uint32_t i = n_; i >= 2; --i) {
      auto x = static_cast<std::uint32_t>(rng.below(i)) + 1;
      auto y = static_cast<std::uint32_t>(rng.below(i - 1)) + 1;
      if (y >= x) ++y;
      const bool toward_a = rng.coin();
      const std::uint32_t a = std::min(x, y);
      const std::uint32_t b = std::max(x, y);
      const auto c = static_cast<std::uint32_t>(groups_.size());
      if (a > c) continue;
      const bool ok = b <= c ? merge_tracked_pair(i, a, b, toward_a)
                             : merge_with_untracked(i, a, toward_a);
      if (!ok) return false;
    }
  } else {
    std::uint32_t i = n_;
    while (i >= 2) {
      const auto c = static_cast<std::uint32_t>(groups_.size());
      const std::uint32_t step = next_event_step(i, c, rng);
      const std::uint64_t inner = static_cast<std::uint64_t>(c) * (c - 1) / 2;
      const std::uint64_t outer = static_cast<std::uint64_t>(c) * (step - c);
      const std::uint64_t r = rng.below(inner + outer);
      const bool toward_a = rng.coin();
      bool ok;
      if (r < inner) {
        // Decode the r-th pair (a < b) of 1..c in colex order.
        std::uint32_t b = 2;
        std::uint64_t before = 0;
        while (before + (b - 1) <= r) {
          before += b - 1;
          ++b;
        }
        const auto a = static_cast<std::uint32_t>(r - before) + 1;
        ok = merge_tracked_pair(step, a, b, toward_a);
      } else {
        const auto g = static_cast<std::uint32_t>((r - inner) / (step - c)) + 1;
        ok = merge_with_untracked(step, g, toward_a);
      }
      if (!ok) return false;
      i = step - 1;
    }
  }

  if (!min_degree_.empty()) {
    for (Label v = 1; v <= k_; ++v)
      if (degree_[v - 1] < min_degree_[v - 1]) return false;
  }
  return true;
}

}  // namespace rrtlab
