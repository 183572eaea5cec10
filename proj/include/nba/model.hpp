#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nba/errors.hpp"
#include "nba/rational.hpp"

namespace nba {

using NodeId = int;  // 1-based

struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
  auto operator<=>(const Edge&) const = default;
};

inline std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.tail) + "," + std::to_string(e.head) + ")";
}

// Billing cycle: p samples per cycle, charge the q-th percentile. The top
// k = floor((1-q)*p) samples per node and direction are free.
struct BillingConfig {
  int sample_count = 1;        // p
  Rat percentile = Rat(19, 20);  // q in (0, 1]

  int discard_count() const {
    // floor((1-q)*p) in exact integer arithmetic.
    Rat r = (Rat(1) - percentile) * Rat(sample_count);
    return static_cast<int>(rat_floor(r));
  }

  void validate() const {
    if (sample_count <= 0) throw InputError("billing: p must be positive");
    if (percentile <= Rat(0) || percentile > Rat(1)) {
      throw InputError("billing: q must lie in (0,1], got " + rat_str(percentile));
    }
    if (discard_count() >= sample_count) {
      throw InputError("billing: floor((1-q)*p) must be < p");
    }
  }
};

struct Network {
  int node_count = 0;           // n, nodes are 1..n
  std::vector<Rat> unit_price;  // u_i, indexed by node-1
  std::vector<Rat> egress_cap;  // c_i^out
  std::vector<Rat> ingress_cap; // c_i^in
  std::set<Edge> base_edges;    // E

  bool has_node(NodeId v) const { return v >= 1 && v <= node_count; }

  void validate() const {
    if (node_count <= 0) throw InputError("network: node count must be positive");
    auto check_vec = [&](const std::vector<Rat>& v, const char* name) {
      if (static_cast<int>(v.size()) != node_count) {
        throw InputError(std::string("network: ") + name + " must have one entry per node");
      }
      for (int i = 0; i < node_count; ++i) {
        if (v[i] <= Rat(0)) {
          throw InputError(std::string("network: ") + name + "[" + std::to_string(i + 1) +
                           "] must be strictly positive");
        }
      }
    };
    check_vec(unit_price, "prices");
    check_vec(egress_cap, "egress_caps");
    check_vec(ingress_cap, "ingress_caps");
    for (const Edge& e : base_edges) {
      if (e.tail == e.head) throw InputError("network: self-loop edge " + edge_str(e));
      if (!has_node(e.tail) || !has_node(e.head)) {
        throw InputError("network: edge " + edge_str(e) + " leaves the node range");
      }
    }
  }
};

struct SourceDemand {
  NodeId source = 0;
  Rat weight;                 // w_s^(t)
  std::set<NodeId> dests;     // D_s^(t)
};

struct SlotDemand {
  int slot = 0;                       // t, 1-based
  std::set<Edge> edges;               // E^(t)
  std::vector<SourceDemand> sources;  // one entry per s in S^(t)

  const SourceDemand* find_source(NodeId s) const {
    for (const auto& sd : sources) {
      if (sd.source == s) return &sd;
    }
    return nullptr;
  }
};

// Scenario specializations tweak the generic model in four places; the
// defaults reproduce the generic NBA semantics.
struct ScenarioRules {
  bool egress_only = false;                       // bill Q(out) instead of max(Q(out), Q(in))
  std::optional<std::set<NodeId>> billed_nodes;   // bill only these (default: every node)
  bool source_single_out = false;                 // source out-degree == 1 instead of >= 1
  std::optional<std::set<NodeId>> replication_nodes;  // relay rule applies only here

  bool is_default() const {
    return !egress_only && !billed_nodes && !source_single_out && !replication_nodes;
  }
  bool bills(NodeId v) const { return !billed_nodes || billed_nodes->count(v) > 0; }
  bool replicates(NodeId v) const {
    return !replication_nodes || replication_nodes->count(v) > 0;
  }
};

struct Instance {
  Network network;
  BillingConfig billing;
  std::vector<SlotDemand> demands;  // exactly billing.sample_count entries, slots 1..p
  ScenarioRules rules;

  const SlotDemand& demand(int t) const { return demands[static_cast<size_t>(t - 1)]; }

  void validate() const {
    network.validate();
    billing.validate();
    if (static_cast<int>(demands.size()) != billing.sample_count) {
      throw InputError("instance: expected " + std::to_string(billing.sample_count) +
                       " slot demands, got " + std::to_string(demands.size()));
    }
    for (int t = 1; t <= billing.sample_count; ++t) {
      const SlotDemand& d = demand(t);
      if (d.slot != t) {
        throw InputError("instance: slot " + std::to_string(t) + " is labeled " +
                         std::to_string(d.slot));
      }
      for (const Edge& e : d.edges) {
        if (!network.has_node(e.tail) || !network.has_node(e.head)) {
          throw InputError("slot " + std::to_string(t) + ": edge " + edge_str(e) +
                           " leaves the node range");
        }
        if (e.tail == e.head) {
          throw InputError("slot " + std::to_string(t) + ": self-loop edge " + edge_str(e));
        }
      }
      std::set<NodeId> seen;
      for (const auto& sd : d.sources) {
        if (!network.has_node(sd.source)) {
          throw InputError("slot " + std::to_string(t) + ": source " +
                           std::to_string(sd.source) + " is not a node");
        }
        if (!seen.insert(sd.source).second) {
          throw InputError("slot " + std::to_string(t) + ": duplicate source " +
                           std::to_string(sd.source));
        }
        if (sd.weight <= Rat(0)) {
          throw InputError("slot " + std::to_string(t) + ": source " +
                           std::to_string(sd.source) + " has non-positive weight");
        }
        for (NodeId dst : sd.dests) {
          if (dst == sd.source) {
            throw InputError("slot " + std::to_string(t) + ": source " +
                             std::to_string(sd.source) + " lists itself as destination");
          }
          if (!network.has_node(dst)) {
            throw InputError("slot " + std::to_string(t) + ": destination " +
                             std::to_string(dst) + " is not a node");
          }
        }
      }
    }
  }
};

// The f variables: per slot, per source, the chosen edge set.
struct AllocationPlan {
  // slot -> source -> sorted edge set
  std::map<int, std::map<NodeId, std::set<Edge>>> edges;

  const std::set<Edge>* find(int t, NodeId s) const {
    auto it = edges.find(t);
    if (it == edges.end()) return nullptr;
    auto jt = it->second.find(s);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  std::set<Edge>& at(int t, NodeId s) { return edges[t][s]; }

  bool empty() const {
    for (const auto& [t, per_source] : edges) {
      for (const auto& [s, es] : per_source) {
        if (!es.empty()) return false;
      }
    }
    return true;
  }
};

// Per-node egress/ingress time series over the billing cycle.
struct BandwidthSeries {
  int sample_count = 0;
  std::vector<std::vector<Rat>> egress;   // [node-1][t-1], phi
  std::vector<std::vector<Rat>> ingress;  // [node-1][t-1], psi
};

}  // namespace nba
