#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <vector>

#include "nba/cost.hpp"
#include "nba/model.hpp"
#include "nba/percentile.hpp"
#include "nba/solvers.hpp"

namespace nba {

// Content delivery: servers form a rooted tree (root imports content,
// internal servers forward, leaves serve customers). The only decision is
// which edge server serves which customer; upstream bandwidth is estimated
// through per-server cache-miss probabilities.
struct CdnInstance {
  int server_count = 0;            // n, servers 1..n
  NodeId root = 1;
  std::vector<NodeId> parent;      // parent[i-1], 0 for the root
  std::vector<Rat> unit_price;     // u_i per server
  std::vector<Rat> egress_cap;     // c_i per server
  BillingConfig billing;

  struct Customer {
    NodeId id = 0;                 // n+1 .. n+m^(t)
    Rat weight;                    // w_j^(t)
    std::set<NodeId> eligible;     // edge servers allowed to serve it
  };
  struct Slot {
    int slot = 0;
    std::vector<Customer> customers;
    std::vector<Rat> miss;         // r_i^(t) per server, in [0,1]
  };
  std::vector<Slot> slots;

  std::vector<NodeId> children(NodeId v) const {
    std::vector<NodeId> out;
    for (NodeId i = 1; i <= server_count; ++i) {
      if (parent[static_cast<size_t>(i - 1)] == v) out.push_back(i);
    }
    return out;
  }
  bool is_leaf(NodeId v) const { return children(v).empty(); }

  std::vector<NodeId> edge_servers() const {
    std::vector<NodeId> out;
    for (NodeId i = 1; i <= server_count; ++i) {
      if (is_leaf(i)) out.push_back(i);
    }
    return out;
  }

  void validate() const {
    if (server_count < 2) throw InputError("cdn: need at least a root and one edge server");
    if (static_cast<int>(parent.size()) != server_count ||
        static_cast<int>(unit_price.size()) != server_count ||
        static_cast<int>(egress_cap.size()) != server_count) {
      throw InputError("cdn: per-server arrays must have one entry per server");
    }
    billing.validate();
    if (root < 1 || root > server_count || parent[static_cast<size_t>(root - 1)] != 0) {
      throw InputError("cdn: root must be a server with no parent");
    }
    for (NodeId i = 1; i <= server_count; ++i) {
      if (i == root) continue;
      NodeId p = parent[static_cast<size_t>(i - 1)];
      if (p < 1 || p > server_count) {
        throw InputError("cdn: server " + std::to_string(i) + " has invalid parent");
      }
      // Walk up; a tree reaches the root without revisiting.
      std::set<NodeId> seen{i};
      NodeId v = i;
      while (v != root) {
        v = parent[static_cast<size_t>(v - 1)];
        if (v < 1 || v > server_count || !seen.insert(v).second) {
          throw InputError("cdn: parent links do not form a tree at server " +
                           std::to_string(i));
        }
      }
      if (unit_price[static_cast<size_t>(i - 1)] <= Rat(0) ||
          egress_cap[static_cast<size_t>(i - 1)] <= Rat(0)) {
        throw InputError("cdn: prices and capacities must be positive");
      }
    }
    if (static_cast<int>(slots.size()) != billing.sample_count) {
      throw InputError("cdn: expected one slot entry per sample");
    }
    for (int t = 1; t <= billing.sample_count; ++t) {
      const Slot& sl = slots[static_cast<size_t>(t - 1)];
      if (sl.slot != t) throw InputError("cdn: slot " + std::to_string(t) + " mislabeled");
      if (static_cast<int>(sl.miss.size()) != server_count) {
        throw InputError("cdn: slot " + std::to_string(t) + " needs one miss probability per server");
      }
      for (const Rat& r : sl.miss) {
        if (r < Rat(0) || r > Rat(1)) {
          throw InputError("cdn: miss probability " + rat_str(r) + " outside [0,1]");
        }
      }
      for (size_t c = 0; c < sl.customers.size(); ++c) {
        const Customer& cu = sl.customers[c];
        if (cu.id != server_count + static_cast<int>(c) + 1) {
          throw InputError("cdn: slot " + std::to_string(t) + " customer ids must be n+1..n+m");
        }
        if (cu.weight <= Rat(0)) throw InputError("cdn: customer demand must be positive");
        for (NodeId e : cu.eligible) {
          if (e < 1 || e > server_count || !is_leaf(e)) {
            throw InputError("cdn: customer " + std::to_string(cu.id) +
                             " lists non-edge-server " + std::to_string(e));
          }
        }
      }
    }
  }
};

// Per slot, each customer's chosen edge server.
struct CdnAssignment {
  std::map<int, std::map<NodeId, NodeId>> choice;  // slot -> customer -> edge server
};

namespace detail {

inline std::map<NodeId, Rat> cdn_leaf_loads(const CdnInstance& cdn, const CdnAssignment& plan,
                                            int t) {
  const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
  std::map<NodeId, Rat> load;
  for (NodeId leaf : cdn.edge_servers()) load[leaf] = Rat(0);
  auto it = plan.choice.find(t);
  for (const auto& cu : sl.customers) {
    NodeId server = 0;
    if (it != plan.choice.end()) {
      auto jt = it->second.find(cu.id);
      if (jt != it->second.end()) server = jt->second;
    }
    if (server == 0) {
      throw PlanShapeError("cdn: customer " + std::to_string(cu.id) + " in slot " +
                           std::to_string(t) + " has no assignment");
    }
    if (cu.eligible.count(server) == 0) {
      throw PlanShapeError("cdn: customer " + std::to_string(cu.id) + " assigned to server " +
                           std::to_string(server) + " it cannot reach");
    }
    load[server] += cu.weight;
  }
  return load;
}

}  // namespace detail

// Upstream bandwidth estimate for internal servers: a parent's egress is the
// miss-weighted sum of what its children move, applied bottom-up (a leaf
// child contributes r_leaf * load, a deeper child r_child * its own
// estimate).
inline std::map<NodeId, Rat> cdn_estimate_upstream(const CdnInstance& cdn,
                                                   const CdnAssignment& plan, int t) {
  const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
  std::map<NodeId, Rat> leaf_load = detail::cdn_leaf_loads(cdn, plan, t);

  std::map<NodeId, Rat> value;  // load for leaves, estimate for internal
  auto eval = [&](auto&& self, NodeId v) -> Rat {
    auto found = value.find(v);
    if (found != value.end()) return found->second;
    Rat result(0);
    if (cdn.is_leaf(v)) {
      result = leaf_load[v];
    } else {
      for (NodeId c : cdn.children(v)) {
        result += sl.miss[static_cast<size_t>(c - 1)] * self(self, c);
      }
    }
    value[v] = result;
    return result;
  };

  std::map<NodeId, Rat> out;
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    if (!cdn.is_leaf(v)) out[v] = eval(eval, v);
  }
  return out;
}

struct CdnSolveReport {
  CdnAssignment assignment;
  Rat cost;
  SolveStatus status = SolveStatus::Infeasible;
  SolveStats stats;
};

// Cost of a complete assignment: billed edge-server egress plus billed
// estimated upstream egress.
inline Rat cdn_total_cost(const CdnInstance& cdn, const CdnAssignment& plan) {
  int p = cdn.billing.sample_count;
  std::map<NodeId, std::vector<Rat>> series;
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    series[v] = std::vector<Rat>(static_cast<size_t>(p), Rat(0));
  }
  for (int t = 1; t <= p; ++t) {
    for (const auto& [leaf, load] : detail::cdn_leaf_loads(cdn, plan, t)) {
      series[leaf][static_cast<size_t>(t - 1)] = load;
    }
    for (const auto& [k, b] : cdn_estimate_upstream(cdn, plan, t)) {
      series[k][static_cast<size_t>(t - 1)] = b;
    }
  }
  Rat total(0);
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    total += cdn.unit_price[static_cast<size_t>(v - 1)] * q_percentile(series[v], cdn.billing);
  }
  return total;
}

inline CdnSolveReport cdn_solve(const CdnInstance& cdn, ScenarioStrategy strategy,
                                const SolveLimits& limits = {}) {
  auto started = std::chrono::steady_clock::now();
  cdn.validate();
  int p = cdn.billing.sample_count;
  std::vector<NodeId> leaves = cdn.edge_servers();
  std::vector<NodeId> internal;
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    if (!cdn.is_leaf(v)) internal.push_back(v);
  }

  CdnSolveReport report;

  if (strategy == ScenarioStrategy::Greedy) {
    int k = cdn.billing.discard_count();
    std::map<NodeId, PercentileTracker> track;
    for (NodeId v = 1; v <= cdn.server_count; ++v) track.emplace(v, PercentileTracker(p, k));

    // Miss factor along the path strictly above a leaf: parent sees r_leaf,
    // grandparent r_parent * r_leaf, and so on.
    auto ancestors_with_factor = [&](NodeId leaf, int t) {
      const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
      std::vector<std::pair<NodeId, Rat>> out;
      Rat factor(1);
      NodeId v = leaf;
      while (v != cdn.root) {
        factor *= sl.miss[static_cast<size_t>(v - 1)];
        v = cdn.parent[static_cast<size_t>(v - 1)];
        out.push_back({v, factor});
      }
      return out;
    };

    for (int t = 1; t <= p; ++t) {
      const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
      std::vector<const CdnInstance::Customer*> order;
      for (const auto& cu : sl.customers) order.push_back(&cu);
      std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->weight != b->weight) return a->weight > b->weight;
        return a->id < b->id;
      });
      for (const auto* cu : order) {
        NodeId best = 0;
        Rat best_delta;
        for (NodeId leaf : leaves) {
          if (cu->eligible.count(leaf) == 0) continue;
          if (track.at(leaf).slot(t) + cu->weight > cdn.egress_cap[static_cast<size_t>(leaf - 1)]) {
            continue;
          }
          bool cap_ok = true;
          Rat delta = cdn.unit_price[static_cast<size_t>(leaf - 1)] *
                      (track.at(leaf).billed_if_added(t, cu->weight) - track.at(leaf).billed());
          for (const auto& [anc, factor] : ancestors_with_factor(leaf, t)) {
            Rat add = factor * cu->weight;
            if (track.at(anc).slot(t) + add > cdn.egress_cap[static_cast<size_t>(anc - 1)]) {
              cap_ok = false;
              break;
            }
            delta += cdn.unit_price[static_cast<size_t>(anc - 1)] *
                     (track.at(anc).billed_if_added(t, add) - track.at(anc).billed());
          }
          if (!cap_ok) continue;
          if (best == 0 || delta < best_delta || (delta == best_delta && leaf < best)) {
            best = leaf;
            best_delta = delta;
          }
        }
        if (best == 0) {
          report.status = SolveStatus::Infeasible;
          report.cost = Rat(0);
          report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
          return report;
        }
        report.assignment.choice[t][cu->id] = best;
        track.at(best).add(t, cu->weight);
        for (const auto& [anc, factor] : ancestors_with_factor(best, t)) {
          track.at(anc).add(t, factor * cu->weight);
        }
      }
    }
    report.status = SolveStatus::Heuristic;
    report.cost = cdn_total_cost(cdn, report.assignment);
    report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    return report;
  }

  // Exact: enumerate per-slot assignments that respect capacities, then
  // branch-and-bound across slots on the percentile coupling.
  struct SlotCandidate {
    std::vector<NodeId> pick;            // per customer, in id order
    std::map<NodeId, Rat> server_load;   // leaf loads and internal estimates
  };
  std::vector<std::vector<SlotCandidate>> per_slot(static_cast<size_t>(p));
  for (int t = 1; t <= p; ++t) {
    const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
    std::vector<NodeId> pick(sl.customers.size(), 0);
    long long tried = 0;
    auto rec = [&](auto&& self, size_t idx) -> void {
      if (idx == sl.customers.size()) {
        if (++tried > limits.max_candidates_per_demand) {
          throw ResourceError("cdn: slot " + std::to_string(t) + " assignment enumeration exceeded " +
                              std::to_string(limits.max_candidates_per_demand));
        }
        CdnAssignment partial;
        for (size_t c = 0; c < pick.size(); ++c) {
          partial.choice[t][sl.customers[c].id] = pick[c];
        }
        std::map<NodeId, Rat> load = detail::cdn_leaf_loads(cdn, partial, t);
        for (const auto& [leaf, l] : load) {
          if (l > cdn.egress_cap[static_cast<size_t>(leaf - 1)]) return;
        }
        std::map<NodeId, Rat> up = cdn_estimate_upstream(cdn, partial, t);
        for (const auto& [kn, b] : up) {
          if (b > cdn.egress_cap[static_cast<size_t>(kn - 1)]) return;
        }
        SlotCandidate cand;
        cand.pick = pick;
        cand.server_load = load;
        for (const auto& [kn, b] : up) cand.server_load[kn] = b;
        per_slot[static_cast<size_t>(t - 1)].push_back(std::move(cand));
        return;
      }
      for (NodeId leaf : sl.customers[idx].eligible) {
        pick[idx] = leaf;
        self(self, idx + 1);
      }
      pick[idx] = 0;
    };
    rec(rec, 0);
    if (per_slot[static_cast<size_t>(t - 1)].empty()) {
      report.status = SolveStatus::Infeasible;
      report.cost = Rat(0);
      report.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      return report;
    }
  }

  std::map<NodeId, std::vector<Rat>> series;
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    series[v] = std::vector<Rat>(static_cast<size_t>(p), Rat(0));
  }
  auto partial_cost = [&]() {
    Rat total(0);
    for (NodeId v = 1; v <= cdn.server_count; ++v) {
      total += cdn.unit_price[static_cast<size_t>(v - 1)] * q_percentile(series[v], cdn.billing);
    }
    return total;
  };

  std::optional<Rat> best;
  std::vector<size_t> best_choice(static_cast<size_t>(p), 0);
  std::vector<size_t> choice(static_cast<size_t>(p), 0);
  long long nodes = 0, leaves_visited = 0;
  auto dfs = [&](auto&& self, int t) -> void {
    if (++nodes > limits.max_search_nodes) {
      throw ResourceError("cdn: cross-slot search exceeded " +
                          std::to_string(limits.max_search_nodes) + " nodes");
    }
    if (t > p) {
      ++leaves_visited;
      Rat c = partial_cost();
      if (!best || c < *best) {
        best = c;
        best_choice = choice;
      }
      return;
    }
    auto& cands = per_slot[static_cast<size_t>(t - 1)];
    for (size_t i = 0; i < cands.size(); ++i) {
      for (const auto& [v, load] : cands[i].server_load) {
        series[v][static_cast<size_t>(t - 1)] = load;
      }
      if (!best || partial_cost() < *best) {
        choice[static_cast<size_t>(t - 1)] = i;
        self(self, t + 1);
      }
      for (const auto& [v, load] : cands[i].server_load) {
        series[v][static_cast<size_t>(t - 1)] = Rat(0);
      }
    }
  };
  dfs(dfs, 1);

  report.stats.search_nodes = nodes;
  report.stats.plans_enumerated = leaves_visited;
  if (!best) {
    report.status = SolveStatus::Infeasible;
    report.cost = Rat(0);
  } else {
    for (int t = 1; t <= p; ++t) {
      const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
      const SlotCandidate& cand = per_slot[static_cast<size_t>(t - 1)][best_choice[static_cast<size_t>(t - 1)]];
      for (size_t c = 0; c < sl.customers.size(); ++c) {
        report.assignment.choice[t][sl.customers[c].id] = cand.pick[c];
      }
    }
    report.status = SolveStatus::ProvenOptimal;
    report.cost = cdn_total_cost(cdn, report.assignment);
  }
  report.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// Lowers a CDN assignment into the generic model, for checking that the
// source and replication constraint families hold by construction there.
// Demands are homogeneous in the generic model, so this requires uniform
// customer weights.
inline std::pair<Instance, AllocationPlan> cdn_lower_generic(const CdnInstance& cdn,
                                                             const CdnAssignment& plan) {
  cdn.validate();
  int max_customers = 0;
  Rat weight(0);
  for (const auto& sl : cdn.slots) {
    max_customers = std::max(max_customers, static_cast<int>(sl.customers.size()));
    for (const auto& cu : sl.customers) {
      if (weight == Rat(0)) weight = cu.weight;
      if (cu.weight != weight) {
        throw InputError("cdn_lower_generic requires uniform customer weights");
      }
    }
  }
  if (weight == Rat(0)) weight = Rat(1);

  Instance inst;
  int n = cdn.server_count + max_customers;
  inst.network.node_count = n;
  Rat big = weight * Rat(n) * Rat(cdn.billing.sample_count) + Rat(1);
  for (NodeId v = 1; v <= n; ++v) {
    inst.network.unit_price.push_back(v <= cdn.server_count
                                          ? cdn.unit_price[static_cast<size_t>(v - 1)]
                                          : Rat(1));
    inst.network.egress_cap.push_back(big);
    inst.network.ingress_cap.push_back(big);
  }
  for (NodeId v = 1; v <= cdn.server_count; ++v) {
    if (v != cdn.root) inst.network.base_edges.insert({cdn.parent[static_cast<size_t>(v - 1)], v});
  }
  for (NodeId leaf : cdn.edge_servers()) {
    for (NodeId cu = cdn.server_count + 1; cu <= n; ++cu) {
      inst.network.base_edges.insert({leaf, cu});
    }
  }
  inst.billing = cdn.billing;

  AllocationPlan lowered;
  for (int t = 1; t <= cdn.billing.sample_count; ++t) {
    const CdnInstance::Slot& sl = cdn.slots[static_cast<size_t>(t - 1)];
    SlotDemand d;
    d.slot = t;
    SourceDemand sd;
    sd.source = cdn.root;
    sd.weight = weight;
    for (NodeId v = 1; v <= cdn.server_count; ++v) {
      if (v != cdn.root) d.edges.insert({cdn.parent[static_cast<size_t>(v - 1)], v});
    }
    for (const auto& cu : sl.customers) {
      sd.dests.insert(cu.id);
      for (NodeId leaf : cu.eligible) d.edges.insert({leaf, cu.id});
    }
    if (!sl.customers.empty()) d.sources.push_back(sd);
    inst.demands.push_back(std::move(d));

    if (sl.customers.empty()) continue;
    std::set<Edge>& chosen = lowered.at(t, cdn.root);
    auto it = plan.choice.find(t);
    for (const auto& cu : sl.customers) {
      if (it == plan.choice.end() || it->second.count(cu.id) == 0) {
        throw PlanShapeError("cdn: slot " + std::to_string(t) + " customer " +
                             std::to_string(cu.id) + " unassigned");
      }
      NodeId leaf = it->second.at(cu.id);
      chosen.insert({leaf, cu.id});
      // Path from the root down to the serving leaf.
      std::vector<NodeId> path;
      for (NodeId v = leaf; v != cdn.root; v = cdn.parent[static_cast<size_t>(v - 1)]) {
        path.push_back(v);
      }
      for (NodeId v : path) chosen.insert({cdn.parent[static_cast<size_t>(v - 1)], v});
    }
  }
  inst.validate();
  return {inst, lowered};
}

}  // namespace nba
