#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nba/cost.hpp"
#include "nba/model.hpp"

namespace nba {

enum class ViolationKind {
  SourceUncovered,
  DestinationUncovered,
  EgressCapExceeded,
  IngressCapExceeded,
  ReplicationFlowViolated,
  ForeignEdge,
};

inline const char* violation_kind_str(ViolationKind k) {
  switch (k) {
    case ViolationKind::SourceUncovered: return "SourceUncovered";
    case ViolationKind::DestinationUncovered: return "DestinationUncovered";
    case ViolationKind::EgressCapExceeded: return "EgressCapExceeded";
    case ViolationKind::IngressCapExceeded: return "IngressCapExceeded";
    case ViolationKind::ReplicationFlowViolated: return "ReplicationFlowViolated";
    case ViolationKind::ForeignEdge: return "ForeignEdge";
  }
  return "?";
}

struct Violation {
  ViolationKind kind = ViolationKind::ForeignEdge;
  int slot = 0;
  std::optional<NodeId> source;
  std::optional<NodeId> node;
  std::optional<Edge> edge;
  Rat measured;
  Rat bound;
  std::string detail;

  std::string str() const {
    std::string s = violation_kind_str(kind);
    s += " t=" + std::to_string(slot);
    if (source) s += " s=" + std::to_string(*source);
    if (node) s += " node=" + std::to_string(*node);
    if (edge) s += " edge=" + edge_str(*edge);
    s += " measured=" + rat_str(measured) + " bound=" + rat_str(bound);
    if (!detail.empty()) s += " (" + detail + ")";
    return s;
  }
};

namespace detail {

struct Degrees {
  std::map<NodeId, int> in, out;
  int indeg(NodeId v) const {
    auto it = in.find(v);
    return it == in.end() ? 0 : it->second;
  }
  int outdeg(NodeId v) const {
    auto it = out.find(v);
    return it == out.end() ? 0 : it->second;
  }
};

inline Degrees degrees(const std::set<Edge>& edges) {
  Degrees d;
  for (const Edge& e : edges) {
    ++d.out[e.tail];
    ++d.in[e.head];
  }
  return d;
}

// Nodes reachable from root along the edge set (root always included).
inline std::set<NodeId> reachable_from(const std::set<Edge>& edges, NodeId root) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const Edge& e : edges) adj[e.tail].push_back(e.head);
  std::set<NodeId> seen{root};
  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    auto it = adj.find(v);
    if (it == adj.end()) continue;
    for (NodeId w : it->second) {
      if (seen.insert(w).second) queue.push_back(w);
    }
  }
  return seen;
}

inline bool covers_all_dests(const std::set<Edge>& edges, NodeId root,
                             const std::set<NodeId>& dests) {
  std::set<NodeId> r = reachable_from(edges, root);
  for (NodeId d : dests) {
    if (r.count(d) == 0) return false;
  }
  return true;
}

}  // namespace detail

// Shape problems reported as data, with the same stable kind the JSON schema
// uses. Empty result means the plan only references slots/sources/edges the
// instance actually has.
inline std::vector<Violation> plan_shape_violations(const Instance& instance,
                                                    const AllocationPlan& plan) {
  std::vector<Violation> out;
  for (const auto& [t, per_source] : plan.edges) {
    if (t < 1 || t > instance.billing.sample_count) {
      Violation v;
      v.kind = ViolationKind::ForeignEdge;
      v.slot = t;
      v.detail = "slot outside 1.." + std::to_string(instance.billing.sample_count);
      out.push_back(v);
      continue;
    }
    const SlotDemand& d = instance.demand(t);
    for (const auto& [s, es] : per_source) {
      if (d.find_source(s) == nullptr) {
        Violation v;
      v.kind = ViolationKind::ForeignEdge;
      v.slot = t;
        v.source = s;
        v.detail = "source not in S^(t)";
        out.push_back(v);
        continue;
      }
      for (const Edge& e : es) {
        if (d.edges.count(e) == 0) {
          Violation v;
      v.kind = ViolationKind::ForeignEdge;
      v.slot = t;
          v.source = s;
          v.edge = e;
          v.detail = "edge not in E^(t)";
          out.push_back(v);
        }
      }
    }
  }
  return out;
}

// Evaluates every constraint family and returns every violation; an empty
// list means the plan is feasible. A shape-invalid plan yields its
// ForeignEdge violations and nothing else. Sources with no destinations are
// exempt from the coverage constraint: they have nothing to transmit, and
// solvers legitimately return empty allocations for them.
inline std::vector<Violation> check_feasible(const Instance& instance,
                                             const AllocationPlan& plan) {
  std::vector<Violation> out = plan_shape_violations(instance, plan);
  if (!out.empty()) return out;

  for (int t = 1; t <= instance.billing.sample_count; ++t) {
    const SlotDemand& d = instance.demand(t);
    std::map<NodeId, Rat> egress_load, ingress_load;

    for (const auto& sd : d.sources) {
      static const std::set<Edge> kEmpty;
      const std::set<Edge>* es = plan.find(t, sd.source);
      const std::set<Edge>& edges = es ? *es : kEmpty;
      detail::Degrees deg = detail::degrees(edges);

      // Source coverage (out-degree >= 1, or == 1 under the single-ingest rule).
      if (!sd.dests.empty()) {
        int od = deg.outdeg(sd.source);
        bool ok = instance.rules.source_single_out ? od == 1 : od >= 1;
        if (!ok) {
          Violation v;
      v.kind = ViolationKind::SourceUncovered;
      v.slot = t;
          v.source = sd.source;
          v.node = sd.source;
          v.measured = Rat(od);
          v.bound = Rat(1);
          out.push_back(v);
        }
      }
      // Destination coverage (in-degree >= 1; the "exactly one" form is a
      // pruning outcome, not a feasibility requirement).
      for (NodeId j : sd.dests) {
        if (deg.indeg(j) < 1) {
          Violation v;
      v.kind = ViolationKind::DestinationUncovered;
      v.slot = t;
          v.source = sd.source;
          v.node = j;
          v.measured = Rat(0);
          v.bound = Rat(1);
          out.push_back(v);
        }
      }
      // Replication: a relay may not take in more than it sends on.
      for (NodeId j = 1; j <= instance.network.node_count; ++j) {
        if (sd.dests.count(j) > 0) continue;
        if (!instance.rules.replicates(j)) continue;
        int in = deg.indeg(j), on = deg.outdeg(j);
        if (in > on) {
          Violation v;
      v.kind = ViolationKind::ReplicationFlowViolated;
      v.slot = t;
          v.source = sd.source;
          v.node = j;
          v.measured = Rat(in);
          v.bound = Rat(on);
          out.push_back(v);
        }
      }
      for (const Edge& e : edges) {
        egress_load[e.tail] += sd.weight;
        ingress_load[e.head] += sd.weight;
      }
    }

    for (const auto& [i, load] : egress_load) {
      const Rat& cap = instance.network.egress_cap[static_cast<size_t>(i - 1)];
      if (load > cap) {
        Violation v;
      v.kind = ViolationKind::EgressCapExceeded;
      v.slot = t;
        v.node = i;
        v.measured = load;
        v.bound = cap;
        out.push_back(v);
      }
    }
    for (const auto& [i, load] : ingress_load) {
      const Rat& cap = instance.network.ingress_cap[static_cast<size_t>(i - 1)];
      if (load > cap) {
        Violation v;
      v.kind = ViolationKind::IngressCapExceeded;
      v.slot = t;
        v.node = i;
        v.measured = load;
        v.bound = cap;
        out.push_back(v);
      }
    }
  }
  return out;
}

namespace detail {

// Per-slot egress of every node under a working plan, used by the pruning
// tie-break (delete the in-edge whose tail currently sends the most).
inline std::map<NodeId, Rat> slot_egress(const Instance& instance, const AllocationPlan& plan,
                                         int t) {
  std::map<NodeId, Rat> load;
  const SlotDemand& d = instance.demand(t);
  auto it = plan.edges.find(t);
  if (it == plan.edges.end()) return load;
  for (const auto& [s, es] : it->second) {
    const Rat& w = d.find_source(s)->weight;
    for (const Edge& e : es) load[e.tail] += w;
  }
  return load;
}

}  // namespace detail

// Applies the edge-deletion argument: per (slot, source), removes edges into
// the source, reduces every in-degree to at most one by repeated single-edge
// deletion (deleting the in-edge whose tail has the largest current egress,
// ties to the smallest tail index, never a deletion that would cut a
// destination off from the source), then drops components unreachable from
// the source and relay branches that no longer lead anywhere. Deletion-only,
// so the cost never increases. Idempotent.
inline AllocationPlan prune_plan(const Instance& instance, const AllocationPlan& plan) {
  std::vector<Violation> violations = check_feasible(instance, plan);
  if (!violations.empty()) {
    std::string msg = "prune_plan requires a feasible plan; violations:";
    for (const auto& v : violations) msg += "\n  " + v.str();
    throw PreconditionError(msg);
  }

  AllocationPlan work = plan;
  for (auto& [t, per_source] : work.edges) {
    const SlotDemand& d = instance.demand(t);
    for (auto& [s, edges] : per_source) {
      const std::set<NodeId>& dests = d.find_source(s)->dests;

      // Edges into the source carry data it already holds.
      for (auto it = edges.begin(); it != edges.end();) {
        it = it->head == s ? edges.erase(it) : std::next(it);
      }

      // In-degree normalization. Only destinations the source actually
      // reaches are protected; a dest "covered" by a component the source
      // never feeds carries no content anyway.
      std::set<NodeId> protected_dests;
      {
        std::set<NodeId> reach0 = detail::reachable_from(edges, s);
        for (NodeId dst : dests) {
          if (reach0.count(dst) > 0) protected_dests.insert(dst);
        }
      }
      for (;;) {
        detail::Degrees deg = detail::degrees(edges);
        NodeId victim = 0;
        for (const auto& [v, in] : deg.in) {
          if (in >= 2) {
            victim = v;
            break;  // maps iterate in ascending node order
          }
        }
        if (victim == 0) break;

        std::map<NodeId, Rat> egress = detail::slot_egress(instance, work, t);
        const Edge* best = nullptr;
        const Edge* fallback = nullptr;
        for (const Edge& e : edges) {
          if (e.head != victim) continue;
          if (!fallback || egress[e.tail] > egress[fallback->tail]) fallback = &e;
          std::set<Edge> without = edges;
          without.erase(e);
          if (!detail::covers_all_dests(without, s, protected_dests)) continue;
          if (!best || egress[e.tail] > egress[best->tail]) best = &e;
          // std::set iterates tails in ascending order, so on ties the
          // earlier (smaller) tail is kept as best.
        }
        // Two in-edges mean two walks from the source into this node, and
        // either walk can feed everything downstream, so some in-edge is
        // deletable whenever the feeds are genuine.
        Edge doomed = best ? *best : *fallback;
        edges.erase(doomed);
      }

      // Components that the source cannot reach waste bandwidth.
      std::set<NodeId> reach = detail::reachable_from(edges, s);
      for (auto it = edges.begin(); it != edges.end();) {
        it = reach.count(it->tail) == 0 ? edges.erase(it) : std::next(it);
      }

      // Trim relay branches that dead-end outside the destination set.
      for (bool changed = true; changed;) {
        changed = false;
        detail::Degrees deg = detail::degrees(edges);
        for (auto it = edges.begin(); it != edges.end();) {
          NodeId leaf = it->head;
          if (dests.count(leaf) == 0 && deg.outdeg(leaf) == 0) {
            it = edges.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
      }
    }
  }
  return work;
}

struct TreeCheck {
  bool ok = true;
  std::string diagnostic;
};

// Checks that the per-(slot, source) subgraph is an out-arborescence rooted
// at the source: root in-degree zero, no cycles, every touched node reachable
// from the root, every other node in-degree exactly one. An empty allocation
// passes (a bare root is a tree).
inline TreeCheck is_directed_tree(const Instance&, const AllocationPlan& plan, int t,
                                  NodeId s) {
  static const std::set<Edge> kEmpty;
  const std::set<Edge>* found = plan.find(t, s);
  const std::set<Edge>& edges = found ? *found : kEmpty;
  if (edges.empty()) return {true, {}};

  detail::Degrees deg = detail::degrees(edges);
  std::set<NodeId> nodes;
  for (const Edge& e : edges) {
    nodes.insert(e.tail);
    nodes.insert(e.head);
  }

  if (deg.indeg(s) != 0) {
    return {false, "source " + std::to_string(s) + " has in-degree " +
                       std::to_string(deg.indeg(s))};
  }

  // Cycle detection over the chosen edges.
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const Edge& e : edges) adj[e.tail].push_back(e.head);
  std::map<NodeId, int> state;  // 0 new, 1 on stack, 2 done
  for (NodeId start : nodes) {
    if (state[start] != 0) continue;
    std::vector<std::pair<NodeId, size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      auto& nexts = adj[v];
      if (idx < nexts.size()) {
        NodeId w = nexts[idx++];
        if (state[w] == 1) {
          return {false, "cycle through node " + std::to_string(w)};
        }
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }

  std::set<NodeId> reach = detail::reachable_from(edges, s);
  for (NodeId v : nodes) {
    if (reach.count(v) == 0) {
      return {false, "node " + std::to_string(v) + " unreachable from source"};
    }
  }
  for (NodeId v : nodes) {
    if (v == s) continue;
    if (deg.indeg(v) != 1) {
      return {false, "node " + std::to_string(v) + " has in-degree " +
                         std::to_string(deg.indeg(v))};
    }
  }
  return {true, {}};
}

}  // namespace nba
