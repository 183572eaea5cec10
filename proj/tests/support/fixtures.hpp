#pragma once

// Hand-built instances shared across the test suites.

#include "nba/model.hpp"

namespace fixtures {

using nba::Edge;
using nba::Instance;
using nba::Rat;

inline Instance simple(int n, int p, Rat cap = Rat(1000)) {
  Instance inst;
  inst.network.node_count = n;
  for (int i = 0; i < n; ++i) {
    inst.network.unit_price.push_back(Rat(1));
    inst.network.egress_cap.push_back(cap);
    inst.network.ingress_cap.push_back(cap);
  }
  inst.billing.sample_count = p;
  for (int t = 1; t <= p; ++t) {
    nba::SlotDemand d;
    d.slot = t;
    inst.demands.push_back(d);
  }
  return inst;
}

inline void complete_slot_edges(Instance& inst, int t) {
  nba::SlotDemand& d = inst.demands[static_cast<size_t>(t - 1)];
  for (int i = 1; i <= inst.network.node_count; ++i) {
    for (int j = 1; j <= inst.network.node_count; ++j) {
      if (i != j) {
        d.edges.insert({i, j});
        inst.network.base_edges.insert({i, j});
      }
    }
  }
}

inline void add_source(Instance& inst, int t, int s, Rat w, std::set<int> dests) {
  nba::SourceDemand sd;
  sd.source = s;
  sd.weight = w;
  for (int v : dests) sd.dests.insert(v);
  inst.demands[static_cast<size_t>(t - 1)].sources.push_back(std::move(sd));
}

// The three-node complete digraph with one source fanning out to the other
// two nodes at unit weight and unit prices: the chain plan costs 3, the star
// plan costs 4, and 3 is optimal.
inline Instance triangle() {
  Instance inst = simple(3, 1);
  complete_slot_edges(inst, 1);
  add_source(inst, 1, 1, Rat(1), {2, 3});
  inst.validate();
  return inst;
}

inline nba::AllocationPlan triangle_chain() {
  nba::AllocationPlan plan;
  plan.at(1, 1) = {Edge{1, 2}, Edge{2, 3}};
  return plan;
}

inline nba::AllocationPlan triangle_star() {
  nba::AllocationPlan plan;
  plan.at(1, 1) = {Edge{1, 2}, Edge{1, 3}};
  return plan;
}

// Two nodes, one forced edge, configurable weight and caps.
inline Instance two_node(Rat w, Rat cap) {
  Instance inst = simple(2, 1, cap);
  inst.demands[0].edges.insert({1, 2});
  inst.network.base_edges.insert({1, 2});
  add_source(inst, 1, 1, w, {2});
  inst.validate();
  return inst;
}

}  // namespace fixtures
