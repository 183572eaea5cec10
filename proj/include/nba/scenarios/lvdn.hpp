#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "nba/model.hpp"

namespace nba {

// Live video delivery: producers upload through exactly one server, servers
// relay, viewers are sinks. Only server egress is billed or capped.
struct LvdnInstance {
  int server_count = 0;          // servers 1..n
  std::vector<Rat> unit_price;   // u_i per server
  std::vector<Rat> egress_cap;   // c_i per server
  BillingConfig billing;

  struct Demand {
    NodeId producer = 0;         // id > n
    Rat weight;                  // w_s^(t)
    std::set<NodeId> viewers;    // ids outside servers and producers
  };
  struct Slot {
    int slot = 0;
    std::set<Edge> edges;        // E^(t) over servers, producers, viewers
    std::vector<Demand> producers;
  };
  std::vector<Slot> slots;

  void validate() const {
    if (server_count <= 0) throw InputError("lvdn: need at least one server");
    if (static_cast<int>(unit_price.size()) != server_count ||
        static_cast<int>(egress_cap.size()) != server_count) {
      throw InputError("lvdn: per-server arrays must have one entry per server");
    }
    for (int i = 0; i < server_count; ++i) {
      if (unit_price[static_cast<size_t>(i)] <= Rat(0) ||
          egress_cap[static_cast<size_t>(i)] <= Rat(0)) {
        throw InputError("lvdn: prices and capacities must be positive");
      }
    }
    billing.validate();
    if (static_cast<int>(slots.size()) != billing.sample_count) {
      throw InputError("lvdn: expected one slot entry per sample");
    }
    for (int t = 1; t <= billing.sample_count; ++t) {
      const Slot& sl = slots[static_cast<size_t>(t - 1)];
      if (sl.slot != t) throw InputError("lvdn: slot " + std::to_string(t) + " mislabeled");
      std::set<NodeId> producer_ids;
      for (const Demand& d : sl.producers) {
        if (d.producer <= server_count) {
          throw InputError("lvdn: producer id " + std::to_string(d.producer) +
                           " collides with a server");
        }
        if (!producer_ids.insert(d.producer).second) {
          throw InputError("lvdn: duplicate producer " + std::to_string(d.producer));
        }
        if (d.weight <= Rat(0)) throw InputError("lvdn: producer weight must be positive");
      }
      for (const Demand& d : sl.producers) {
        for (NodeId v : d.viewers) {
          if (v <= server_count || producer_ids.count(v) > 0) {
            throw InputError("lvdn: viewer " + std::to_string(v) +
                             " must be disjoint from servers and producers");
          }
        }
      }
    }
  }
};

// Lowers to the generic model: servers keep their ids, producers and viewers
// become ordinary nodes with nominal prices and non-binding capacities, and
// the scenario rules carry the differences (egress-only billing restricted
// to servers, single ingest edge per producer, replication enforced on
// servers only).
inline Instance lvdn_lower(const LvdnInstance& lvdn) {
  lvdn.validate();

  NodeId max_id = lvdn.server_count;
  Rat weight_total(0);
  for (const auto& sl : lvdn.slots) {
    for (const Edge& e : sl.edges) {
      max_id = std::max(max_id, std::max(e.tail, e.head));
    }
    for (const auto& d : sl.producers) {
      max_id = std::max(max_id, d.producer);
      for (NodeId v : d.viewers) max_id = std::max(max_id, v);
      weight_total += d.weight;
    }
  }

  Instance inst;
  inst.network.node_count = max_id;
  Rat big = weight_total * Rat(max_id) + Rat(1);
  for (NodeId v = 1; v <= max_id; ++v) {
    bool server = v <= lvdn.server_count;
    inst.network.unit_price.push_back(server ? lvdn.unit_price[static_cast<size_t>(v - 1)]
                                             : Rat(1));
    inst.network.egress_cap.push_back(server ? lvdn.egress_cap[static_cast<size_t>(v - 1)]
                                             : big);
    inst.network.ingress_cap.push_back(big);  // the scenario model has no ingress caps
  }
  inst.billing = lvdn.billing;

  std::set<NodeId> servers;
  for (NodeId v = 1; v <= lvdn.server_count; ++v) servers.insert(v);
  inst.rules.egress_only = true;
  inst.rules.billed_nodes = servers;
  inst.rules.source_single_out = true;
  inst.rules.replication_nodes = servers;

  for (int t = 1; t <= lvdn.billing.sample_count; ++t) {
    const LvdnInstance::Slot& sl = lvdn.slots[static_cast<size_t>(t - 1)];
    SlotDemand d;
    d.slot = t;
    d.edges = sl.edges;
    for (const Edge& e : sl.edges) inst.network.base_edges.insert(e);
    for (const auto& pd : sl.producers) {
      SourceDemand sd;
      sd.source = pd.producer;
      sd.weight = pd.weight;
      sd.dests = pd.viewers;
      d.sources.push_back(std::move(sd));
    }
    inst.demands.push_back(std::move(d));
  }
  inst.validate();
  return inst;
}

}  // namespace nba
