#pragma once

#include <string>
#include <vector>

#include "nba/errors.hpp"
#include "nba/model.hpp"
#include "nba/percentile.hpp"

namespace nba {

namespace detail {

inline void require_plan_shape(const Instance& instance, const AllocationPlan& plan) {
  for (const auto& [t, per_source] : plan.edges) {
    if (t < 1 || t > instance.billing.sample_count) {
      throw PlanShapeError("plan references slot " + std::to_string(t) +
                           " outside 1.." + std::to_string(instance.billing.sample_count));
    }
    const SlotDemand& d = instance.demand(t);
    for (const auto& [s, es] : per_source) {
      if (d.find_source(s) == nullptr) {
        throw PlanShapeError("plan slot " + std::to_string(t) + " references source " +
                             std::to_string(s) + " absent from the instance");
      }
      for (const Edge& e : es) {
        if (d.edges.count(e) == 0) {
          throw PlanShapeError("plan slot " + std::to_string(t) + " source " +
                               std::to_string(s) + " uses edge " + edge_str(e) +
                               " not available in that slot");
        }
      }
    }
  }
}

}  // namespace detail

// Per-node egress/ingress distributions of a plan:
//   phi_i(t) = sum_s w_s * outdeg_s(i),  psi_i(t) = sum_s w_s * indeg_s(i).
// Nodes untouched by the plan get all-zero series.
inline BandwidthSeries bandwidth_series(const Instance& instance, const AllocationPlan& plan) {
  detail::require_plan_shape(instance, plan);
  int n = instance.network.node_count;
  int p = instance.billing.sample_count;
  BandwidthSeries series;
  series.sample_count = p;
  series.egress.assign(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(p), Rat(0)));
  series.ingress.assign(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(p), Rat(0)));
  for (const auto& [t, per_source] : plan.edges) {
    const SlotDemand& d = instance.demand(t);
    for (const auto& [s, es] : per_source) {
      const Rat& w = d.find_source(s)->weight;
      for (const Edge& e : es) {
        series.egress[static_cast<size_t>(e.tail - 1)][static_cast<size_t>(t - 1)] += w;
        series.ingress[static_cast<size_t>(e.head - 1)][static_cast<size_t>(t - 1)] += w;
      }
    }
  }
  return series;
}

// Billed value of one node given its two series and the scenario rules.
inline Rat node_billed_value(const Instance& instance, const BandwidthSeries& series,
                             NodeId i) {
  Rat out = q_percentile(series.egress[static_cast<size_t>(i - 1)], instance.billing);
  if (instance.rules.egress_only) return out;
  Rat in = q_percentile(series.ingress[static_cast<size_t>(i - 1)], instance.billing);
  return out > in ? out : in;
}

// Total cycle cost: sum over billed nodes of u_i times the billed bandwidth.
// Defined for any shape-valid plan; feasibility is not required.
inline Rat total_cost(const Instance& instance, const AllocationPlan& plan) {
  BandwidthSeries series = bandwidth_series(instance, plan);
  Rat total(0);
  for (NodeId i = 1; i <= instance.network.node_count; ++i) {
    if (!instance.rules.bills(i)) continue;
    total += instance.network.unit_price[static_cast<size_t>(i - 1)] *
             node_billed_value(instance, series, i);
  }
  return total;
}

}  // namespace nba
