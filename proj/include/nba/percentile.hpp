#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "nba/errors.hpp"
#include "nba/model.hpp"
#include "nba/rational.hpp"

namespace nba {

// q-th percentile under burstable billing: drop the k = floor((1-q)*p)
// largest samples, charge the maximum of the rest. Equivalently the k-th
// entry (0-based) of the series sorted descending.
inline Rat q_percentile(const std::vector<Rat>& series, const BillingConfig& billing) {
  if (static_cast<int>(series.size()) != billing.sample_count) {
    throw InputError("q_percentile: expected " + std::to_string(billing.sample_count) +
                     " samples, got " + std::to_string(series.size()));
  }
  int k = billing.discard_count();
  std::vector<Rat> sorted = series;
  std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end(), std::greater<Rat>());
  return sorted[static_cast<size_t>(k)];
}

// Incremental variant for heuristics: a node's per-slot load plus a sorted
// multiset of the same values, so the billed value after a single-slot load
// change costs O(log p) instead of a fresh sort.
class PercentileTracker {
 public:
  PercentileTracker() = default;
  PercentileTracker(int sample_count, int discard_count)
      : slots_(static_cast<size_t>(sample_count), Rat(0)), discard_(discard_count) {
    for (int t = 0; t < sample_count; ++t) sorted_.insert(Rat(0));
  }

  const Rat& slot(int t) const { return slots_[static_cast<size_t>(t - 1)]; }

  void add(int t, const Rat& delta) {
    Rat& cell = slots_[static_cast<size_t>(t - 1)];
    sorted_.erase(sorted_.find(cell));
    cell += delta;
    sorted_.insert(cell);
  }

  // Billed value of the current series.
  Rat billed() const {
    auto it = sorted_.begin();
    std::advance(it, discard_);
    return *it;
  }

  // Billed value if slot t were increased by delta; restores state before
  // returning.
  Rat billed_if_added(int t, const Rat& delta) {
    add(t, delta);
    Rat value = billed();
    add(t, -delta);
    return value;
  }

 private:
  std::vector<Rat> slots_;
  std::multiset<Rat, std::greater<Rat>> sorted_;
  int discard_ = 0;
};

}  // namespace nba
