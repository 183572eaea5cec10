#pragma once

#include <charconv>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "nba/feasibility.hpp"
#include "nba/gen.hpp"
#include "nba/model.hpp"
#include "nba/scenarios/cdn.hpp"
#include "nba/scenarios/cloudwan.hpp"
#include "nba/scenarios/lvdn.hpp"
#include "nba/scenarios/rtcn.hpp"
#include "nba/solvers.hpp"

namespace nba {

using json = nlohmann::json;

// Rationals serialize as plain integers when integral and "n/d" strings
// otherwise, so values round-trip exactly. Decimal input (0.95) is accepted
// and read digit-exactly.
inline json rat_to_json(const Rat& r) {
  if (is_integer(r)) return json(r.numerator());
  return json(rat_str(r));
}

inline Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_unsigned()) {
    auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
      throw InputError(where + ": integer too large");
    }
    return Rat(static_cast<long long>(v));
  }
  if (j.is_number_float()) {
    // Shortest round-trip decimal of the double, then exact decimal parse.
    double d = j.get<double>();
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
    if (ec != std::errc{}) throw InputError(where + ": unprintable number");
    return parse_rat(std::string_view(buf, static_cast<size_t>(ptr - buf)));
  }
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw InputError(where + ": expected a number or \"n/d\" string");
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

inline int int_field(const json& j, const char* key, const std::string& where) {
  const json& f = field(j, key, where);
  if (!f.is_number_integer() && !f.is_number_unsigned()) {
    throw InputError(where + "." + key + ": expected an integer");
  }
  return f.get<int>();
}

inline std::vector<Rat> rat_array(const json& j, const char* key, const std::string& where) {
  const json& f = field(j, key, where);
  if (!f.is_array()) throw InputError(where + "." + key + ": expected an array");
  std::vector<Rat> out;
  for (size_t i = 0; i < f.size(); ++i) {
    out.push_back(rat_from_json(f[i], where + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Edge edge_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw InputError(where + ": edge must be [i, j]");
  return Edge{j[0].get<int>(), j[1].get<int>()};
}

inline json edge_to_json(const Edge& e) { return json::array({e.tail, e.head}); }

inline void expect_schema(const json& j, const char* schema, const std::string& where) {
  if (!j.is_object() || field(j, "schema", where) != schema) {
    throw InputError(where + ": expected schema '" + std::string(schema) + "'");
  }
}

}  // namespace detail

// ---- nba-instance/1 ----

inline json instance_to_json(const Instance& inst) {
  json network;
  network["n"] = inst.network.node_count;
  network["prices"] = json::array();
  network["egress_caps"] = json::array();
  network["ingress_caps"] = json::array();
  for (int i = 0; i < inst.network.node_count; ++i) {
    network["prices"].push_back(rat_to_json(inst.network.unit_price[static_cast<size_t>(i)]));
    network["egress_caps"].push_back(rat_to_json(inst.network.egress_cap[static_cast<size_t>(i)]));
    network["ingress_caps"].push_back(
        rat_to_json(inst.network.ingress_cap[static_cast<size_t>(i)]));
  }
  network["edges"] = json::array();
  for (const Edge& e : inst.network.base_edges) network["edges"].push_back(detail::edge_to_json(e));

  json billing;
  billing["p"] = inst.billing.sample_count;
  billing["q"] = rat_to_json(inst.billing.percentile);

  json demands = json::array();
  for (const SlotDemand& d : inst.demands) {
    json slot;
    slot["t"] = d.slot;
    slot["edges"] = json::array();
    for (const Edge& e : d.edges) slot["edges"].push_back(detail::edge_to_json(e));
    slot["sources"] = json::array();
    for (const SourceDemand& sd : d.sources) {
      json src;
      src["s"] = sd.source;
      src["w"] = rat_to_json(sd.weight);
      src["dests"] = json::array();
      for (NodeId v : sd.dests) src["dests"].push_back(v);
      slot["sources"].push_back(std::move(src));
    }
    demands.push_back(std::move(slot));
  }

  json out;
  out["schema"] = "nba-instance/1";
  out["network"] = std::move(network);
  out["billing"] = std::move(billing);
  out["demands"] = std::move(demands);
  if (!inst.rules.is_default()) {
    json rules;
    rules["egress_only"] = inst.rules.egress_only;
    rules["source_single_out"] = inst.rules.source_single_out;
    if (inst.rules.billed_nodes) {
      rules["billed_nodes"] = json::array();
      for (NodeId v : *inst.rules.billed_nodes) rules["billed_nodes"].push_back(v);
    }
    if (inst.rules.replication_nodes) {
      rules["replication_nodes"] = json::array();
      for (NodeId v : *inst.rules.replication_nodes) rules["replication_nodes"].push_back(v);
    }
    out["rules"] = std::move(rules);
  }
  return out;
}

inline Instance instance_from_json(const json& j) {
  detail::expect_schema(j, "nba-instance/1", "instance");
  Instance inst;
  const json& network = detail::field(j, "network", "instance");
  inst.network.node_count = detail::int_field(network, "n", "instance.network");
  inst.network.unit_price = detail::rat_array(network, "prices", "instance.network");
  inst.network.egress_cap = detail::rat_array(network, "egress_caps", "instance.network");
  inst.network.ingress_cap = detail::rat_array(network, "ingress_caps", "instance.network");
  for (const json& e : detail::field(network, "edges", "instance.network")) {
    inst.network.base_edges.insert(detail::edge_from_json(e, "instance.network.edges"));
  }
  const json& billing = detail::field(j, "billing", "instance");
  inst.billing.sample_count = detail::int_field(billing, "p", "instance.billing");
  inst.billing.percentile = rat_from_json(detail::field(billing, "q", "instance.billing"),
                                          "instance.billing.q");
  for (const json& d : detail::field(j, "demands", "instance")) {
    SlotDemand slot;
    slot.slot = detail::int_field(d, "t", "instance.demands");
    for (const json& e : detail::field(d, "edges", "instance.demands")) {
      slot.edges.insert(detail::edge_from_json(e, "instance.demands.edges"));
    }
    for (const json& s : detail::field(d, "sources", "instance.demands")) {
      SourceDemand sd;
      sd.source = detail::int_field(s, "s", "instance.demands.sources");
      sd.weight = rat_from_json(detail::field(s, "w", "instance.demands.sources"),
                                "instance.demands.sources.w");
      for (const json& v : detail::field(s, "dests", "instance.demands.sources")) {
        sd.dests.insert(v.get<int>());
      }
      slot.sources.push_back(std::move(sd));
    }
    inst.demands.push_back(std::move(slot));
  }
  if (j.contains("rules")) {
    const json& rules = j["rules"];
    if (rules.contains("egress_only")) inst.rules.egress_only = rules["egress_only"].get<bool>();
    if (rules.contains("source_single_out")) {
      inst.rules.source_single_out = rules["source_single_out"].get<bool>();
    }
    if (rules.contains("billed_nodes")) {
      std::set<NodeId> nodes;
      for (const json& v : rules["billed_nodes"]) nodes.insert(v.get<int>());
      inst.rules.billed_nodes = std::move(nodes);
    }
    if (rules.contains("replication_nodes")) {
      std::set<NodeId> nodes;
      for (const json& v : rules["replication_nodes"]) nodes.insert(v.get<int>());
      inst.rules.replication_nodes = std::move(nodes);
    }
  }
  inst.validate();
  return inst;
}

// ---- nba-plan/1 ----

inline json plan_to_json(const AllocationPlan& plan) {
  json slots = json::array();
  for (const auto& [t, per_source] : plan.edges) {
    json slot;
    slot["t"] = t;
    slot["sources"] = json::array();
    for (const auto& [s, es] : per_source) {
      json src;
      src["s"] = s;
      src["edges"] = json::array();
      for (const Edge& e : es) src["edges"].push_back(detail::edge_to_json(e));
      slot["sources"].push_back(std::move(src));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-plan/1";
  out["slots"] = std::move(slots);
  return out;
}

inline AllocationPlan plan_from_json(const json& j) {
  detail::expect_schema(j, "nba-plan/1", "plan");
  AllocationPlan plan;
  for (const json& slot : detail::field(j, "slots", "plan")) {
    int t = detail::int_field(slot, "t", "plan.slots");
    for (const json& src : detail::field(slot, "sources", "plan.slots")) {
      int s = detail::int_field(src, "s", "plan.slots.sources");
      auto& set = plan.at(t, s);
      for (const json& e : detail::field(src, "edges", "plan.slots.sources")) {
        set.insert(detail::edge_from_json(e, "plan.slots.sources.edges"));
      }
    }
  }
  return plan;
}

// ---- nba-violations/1 ----

inline json violations_to_json(const std::vector<Violation>& violations) {
  json arr = json::array();
  for (const Violation& v : violations) {
    json item;
    item["kind"] = violation_kind_str(v.kind);
    item["t"] = v.slot;
    if (v.source) item["s"] = *v.source;
    if (v.node) item["node"] = *v.node;
    if (v.edge) item["edge"] = detail::edge_to_json(*v.edge);
    item["measured"] = rat_to_json(v.measured);
    item["bound"] = rat_to_json(v.bound);
    if (!v.detail.empty()) item["detail"] = v.detail;
    arr.push_back(std::move(item));
  }
  json out;
  out["schema"] = "nba-violations/1";
  out["violations"] = std::move(arr);
  return out;
}

// ---- nba-report/1 ----
// Wall time is intentionally not serialized: report bytes must be a pure
// function of (instance, seed) in single-worker mode.

inline json report_to_json(const SolveReport& report) {
  json stats;
  stats["plans_enumerated"] = report.stats.plans_enumerated;
  stats["search_nodes"] = report.stats.search_nodes;
  stats["moves_applied"] = report.stats.moves_applied;
  stats["cost_trace"] = json::array();
  for (const Rat& c : report.stats.cost_trace) stats["cost_trace"].push_back(rat_to_json(c));
  json out;
  out["schema"] = "nba-report/1";
  out["status"] = solve_status_str(report.status);
  out["cost"] = rat_to_json(report.cost);
  out["plan"] = plan_to_json(report.plan);
  out["statistics"] = std::move(stats);
  return out;
}

// ---- nba-cdn/1 ----

inline json cdn_to_json(const CdnInstance& cdn) {
  json servers;
  servers["n"] = cdn.server_count;
  servers["root"] = cdn.root;
  servers["parent"] = json::array();
  servers["prices"] = json::array();
  servers["caps"] = json::array();
  for (int i = 0; i < cdn.server_count; ++i) {
    servers["parent"].push_back(cdn.parent[static_cast<size_t>(i)]);
    servers["prices"].push_back(rat_to_json(cdn.unit_price[static_cast<size_t>(i)]));
    servers["caps"].push_back(rat_to_json(cdn.egress_cap[static_cast<size_t>(i)]));
  }
  json slots = json::array();
  for (const auto& sl : cdn.slots) {
    json slot;
    slot["t"] = sl.slot;
    slot["miss"] = json::array();
    for (const Rat& r : sl.miss) slot["miss"].push_back(rat_to_json(r));
    slot["customers"] = json::array();
    for (const auto& cu : sl.customers) {
      json c;
      c["id"] = cu.id;
      c["w"] = rat_to_json(cu.weight);
      c["eligible"] = json::array();
      for (NodeId e : cu.eligible) c["eligible"].push_back(e);
      slot["customers"].push_back(std::move(c));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-cdn/1";
  out["servers"] = std::move(servers);
  json billing;
  billing["p"] = cdn.billing.sample_count;
  billing["q"] = rat_to_json(cdn.billing.percentile);
  out["billing"] = std::move(billing);
  out["slots"] = std::move(slots);
  return out;
}

inline CdnInstance cdn_from_json(const json& j) {
  detail::expect_schema(j, "nba-cdn/1", "cdn");
  CdnInstance cdn;
  const json& servers = detail::field(j, "servers", "cdn");
  cdn.server_count = detail::int_field(servers, "n", "cdn.servers");
  cdn.root = detail::int_field(servers, "root", "cdn.servers");
  for (const json& v : detail::field(servers, "parent", "cdn.servers")) {
    cdn.parent.push_back(v.get<int>());
  }
  cdn.unit_price = detail::rat_array(servers, "prices", "cdn.servers");
  cdn.egress_cap = detail::rat_array(servers, "caps", "cdn.servers");
  const json& billing = detail::field(j, "billing", "cdn");
  cdn.billing.sample_count = detail::int_field(billing, "p", "cdn.billing");
  cdn.billing.percentile = rat_from_json(detail::field(billing, "q", "cdn.billing"),
                                         "cdn.billing.q");
  for (const json& sl : detail::field(j, "slots", "cdn")) {
    CdnInstance::Slot slot;
    slot.slot = detail::int_field(sl, "t", "cdn.slots");
    slot.miss = detail::rat_array(sl, "miss", "cdn.slots");
    for (const json& c : detail::field(sl, "customers", "cdn.slots")) {
      CdnInstance::Customer cu;
      cu.id = detail::int_field(c, "id", "cdn.slots.customers");
      cu.weight = rat_from_json(detail::field(c, "w", "cdn.slots.customers"),
                                "cdn.slots.customers.w");
      for (const json& e : detail::field(c, "eligible", "cdn.slots.customers")) {
        cu.eligible.insert(e.get<int>());
      }
      slot.customers.push_back(std::move(cu));
    }
    cdn.slots.push_back(std::move(slot));
  }
  cdn.validate();
  return cdn;
}

inline json cdn_assignment_to_json(const CdnAssignment& plan) {
  json slots = json::array();
  for (const auto& [t, per_customer] : plan.choice) {
    json slot;
    slot["t"] = t;
    slot["assign"] = json::array();
    for (const auto& [customer, server] : per_customer) {
      json a;
      a["customer"] = customer;
      a["server"] = server;
      slot["assign"].push_back(std::move(a));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-cdn-assignment/1";
  out["slots"] = std::move(slots);
  return out;
}

// ---- nba-lvdn/1 ----

inline json lvdn_to_json(const LvdnInstance& lvdn) {
  json servers;
  servers["n"] = lvdn.server_count;
  servers["prices"] = json::array();
  servers["caps"] = json::array();
  for (int i = 0; i < lvdn.server_count; ++i) {
    servers["prices"].push_back(rat_to_json(lvdn.unit_price[static_cast<size_t>(i)]));
    servers["caps"].push_back(rat_to_json(lvdn.egress_cap[static_cast<size_t>(i)]));
  }
  json slots = json::array();
  for (const auto& sl : lvdn.slots) {
    json slot;
    slot["t"] = sl.slot;
    slot["edges"] = json::array();
    for (const Edge& e : sl.edges) slot["edges"].push_back(detail::edge_to_json(e));
    slot["producers"] = json::array();
    for (const auto& d : sl.producers) {
      json pd;
      pd["s"] = d.producer;
      pd["w"] = rat_to_json(d.weight);
      pd["viewers"] = json::array();
      for (NodeId v : d.viewers) pd["viewers"].push_back(v);
      slot["producers"].push_back(std::move(pd));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-lvdn/1";
  out["servers"] = std::move(servers);
  json billing;
  billing["p"] = lvdn.billing.sample_count;
  billing["q"] = rat_to_json(lvdn.billing.percentile);
  out["billing"] = std::move(billing);
  out["slots"] = std::move(slots);
  return out;
}

inline LvdnInstance lvdn_from_json(const json& j) {
  detail::expect_schema(j, "nba-lvdn/1", "lvdn");
  LvdnInstance lvdn;
  const json& servers = detail::field(j, "servers", "lvdn");
  lvdn.server_count = detail::int_field(servers, "n", "lvdn.servers");
  lvdn.unit_price = detail::rat_array(servers, "prices", "lvdn.servers");
  lvdn.egress_cap = detail::rat_array(servers, "caps", "lvdn.servers");
  const json& billing = detail::field(j, "billing", "lvdn");
  lvdn.billing.sample_count = detail::int_field(billing, "p", "lvdn.billing");
  lvdn.billing.percentile = rat_from_json(detail::field(billing, "q", "lvdn.billing"),
                                          "lvdn.billing.q");
  for (const json& sl : detail::field(j, "slots", "lvdn")) {
    LvdnInstance::Slot slot;
    slot.slot = detail::int_field(sl, "t", "lvdn.slots");
    for (const json& e : detail::field(sl, "edges", "lvdn.slots")) {
      slot.edges.insert(detail::edge_from_json(e, "lvdn.slots.edges"));
    }
    for (const json& pd : detail::field(sl, "producers", "lvdn.slots")) {
      LvdnInstance::Demand d;
      d.producer = detail::int_field(pd, "s", "lvdn.slots.producers");
      d.weight = rat_from_json(detail::field(pd, "w", "lvdn.slots.producers"),
                               "lvdn.slots.producers.w");
      for (const json& v : detail::field(pd, "viewers", "lvdn.slots.producers")) {
        d.viewers.insert(v.get<int>());
      }
      slot.producers.push_back(std::move(d));
    }
    lvdn.slots.push_back(std::move(slot));
  }
  lvdn.validate();
  return lvdn;
}

// ---- nba-rtcn/1 ----

inline json rtcn_to_json(const RtcnInstance& rtcn) {
  json servers;
  servers["n"] = rtcn.server_count;
  servers["prices"] = json::array();
  servers["caps"] = json::array();
  for (int i = 0; i < rtcn.server_count; ++i) {
    servers["prices"].push_back(rat_to_json(rtcn.unit_price[static_cast<size_t>(i)]));
    servers["caps"].push_back(rat_to_json(rtcn.egress_cap[static_cast<size_t>(i)]));
  }
  json slots = json::array();
  for (const auto& sl : rtcn.slots) {
    json slot;
    slot["t"] = sl.slot;
    slot["edges"] = json::array();
    for (const Edge& e : sl.edges) slot["edges"].push_back(detail::edge_to_json(e));
    slot["participants"] = json::array();
    for (const auto& pt : sl.participants) {
      json pj;
      pj["s"] = pt.id;
      pj["w"] = rat_to_json(pt.weight);
      slot["participants"].push_back(std::move(pj));
    }
    slot["groups"] = json::array();
    for (const auto& group : sl.groups) {
      json g = json::array();
      for (NodeId s : group) g.push_back(s);
      slot["groups"].push_back(std::move(g));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-rtcn/1";
  out["servers"] = std::move(servers);
  json billing;
  billing["p"] = rtcn.billing.sample_count;
  billing["q"] = rat_to_json(rtcn.billing.percentile);
  out["billing"] = std::move(billing);
  out["slots"] = std::move(slots);
  return out;
}

inline RtcnInstance rtcn_from_json(const json& j) {
  detail::expect_schema(j, "nba-rtcn/1", "rtcn");
  RtcnInstance rtcn;
  const json& servers = detail::field(j, "servers", "rtcn");
  rtcn.server_count = detail::int_field(servers, "n", "rtcn.servers");
  rtcn.unit_price = detail::rat_array(servers, "prices", "rtcn.servers");
  rtcn.egress_cap = detail::rat_array(servers, "caps", "rtcn.servers");
  const json& billing = detail::field(j, "billing", "rtcn");
  rtcn.billing.sample_count = detail::int_field(billing, "p", "rtcn.billing");
  rtcn.billing.percentile = rat_from_json(detail::field(billing, "q", "rtcn.billing"),
                                          "rtcn.billing.q");
  for (const json& sl : detail::field(j, "slots", "rtcn")) {
    RtcnInstance::Slot slot;
    slot.slot = detail::int_field(sl, "t", "rtcn.slots");
    for (const json& e : detail::field(sl, "edges", "rtcn.slots")) {
      slot.edges.insert(detail::edge_from_json(e, "rtcn.slots.edges"));
    }
    for (const json& pj : detail::field(sl, "participants", "rtcn.slots")) {
      RtcnInstance::Participant pt;
      pt.id = detail::int_field(pj, "s", "rtcn.slots.participants");
      pt.weight = rat_from_json(detail::field(pj, "w", "rtcn.slots.participants"),
                                "rtcn.slots.participants.w");
      slot.participants.push_back(pt);
    }
    for (const json& g : detail::field(sl, "groups", "rtcn.slots")) {
      std::vector<NodeId> group;
      for (const json& s : g) group.push_back(s.get<int>());
      slot.groups.push_back(std::move(group));
    }
    rtcn.slots.push_back(std::move(slot));
  }
  rtcn.validate();
  return rtcn;
}

// ---- nba-cwan/1 ----

inline json cloudwan_to_json(const CloudWanInstance& cw) {
  json pops;
  pops["m"] = cw.pop_count;
  pops["prices"] = json::array();
  pops["caps"] = json::array();
  for (int i = 0; i < cw.pop_count; ++i) {
    pops["prices"].push_back(rat_to_json(cw.unit_price[static_cast<size_t>(i)]));
    pops["caps"].push_back(cw.egress_cap[static_cast<size_t>(i)]);
  }
  json slots = json::array();
  for (const auto& sl : cw.slots) {
    json slot;
    slot["t"] = sl.slot;
    slot["edges"] = json::array();
    for (const Edge& e : sl.edges) slot["edges"].push_back(detail::edge_to_json(e));
    slot["demands"] = sl.demand;
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-cwan/1";
  out["pops"] = std::move(pops);
  out["clients"] = cw.client_count;
  json billing;
  billing["p"] = cw.billing.sample_count;
  billing["q"] = rat_to_json(cw.billing.percentile);
  out["billing"] = std::move(billing);
  out["slots"] = std::move(slots);
  return out;
}

inline CloudWanInstance cloudwan_from_json(const json& j) {
  detail::expect_schema(j, "nba-cwan/1", "cwan");
  CloudWanInstance cw;
  const json& pops = detail::field(j, "pops", "cwan");
  cw.pop_count = detail::int_field(pops, "m", "cwan.pops");
  cw.unit_price = detail::rat_array(pops, "prices", "cwan.pops");
  for (const json& c : detail::field(pops, "caps", "cwan.pops")) {
    cw.egress_cap.push_back(c.get<long long>());
  }
  cw.client_count = detail::int_field(j, "clients", "cwan");
  const json& billing = detail::field(j, "billing", "cwan");
  cw.billing.sample_count = detail::int_field(billing, "p", "cwan.billing");
  cw.billing.percentile = rat_from_json(detail::field(billing, "q", "cwan.billing"),
                                        "cwan.billing.q");
  for (const json& sl : detail::field(j, "slots", "cwan")) {
    CloudWanInstance::Slot slot;
    slot.slot = detail::int_field(sl, "t", "cwan.slots");
    for (const json& e : detail::field(sl, "edges", "cwan.slots")) {
      slot.edges.insert(detail::edge_from_json(e, "cwan.slots.edges"));
    }
    for (const json& d : detail::field(sl, "demands", "cwan.slots")) {
      slot.demand.push_back(d.get<long long>());
    }
    cw.slots.push_back(std::move(slot));
  }
  cw.validate();
  return cw;
}

inline json cloudwan_flows_to_json(const CloudWanFlows& flows) {
  json slots = json::array();
  for (const auto& [t, per_edge] : flows.flow) {
    json slot;
    slot["t"] = t;
    slot["flows"] = json::array();
    for (const auto& [e, amount] : per_edge) {
      json f;
      f["edge"] = detail::edge_to_json(e);
      f["amount"] = amount;
      slot["flows"].push_back(std::move(f));
    }
    slots.push_back(std::move(slot));
  }
  json out;
  out["schema"] = "nba-cwan-flows/1";
  out["slots"] = std::move(slots);
  return out;
}

// ---- nba-genspec/1 ----

inline GenSpec genspec_from_json(const json& j) {
  detail::expect_schema(j, "nba-genspec/1", "genspec");
  GenSpec spec;
  spec.seed = detail::field(j, "seed", "genspec").get<std::uint64_t>();
  std::string kind = j.value("kind", "generic");
  if (kind == "generic") {
    spec.kind = GenSpec::Kind::Generic;
  } else if (kind == "cdn") {
    spec.kind = GenSpec::Kind::Cdn;
  } else if (kind == "lvdn") {
    spec.kind = GenSpec::Kind::Lvdn;
  } else if (kind == "rtcn") {
    spec.kind = GenSpec::Kind::Rtcn;
  } else if (kind == "cwan") {
    spec.kind = GenSpec::Kind::CloudWan;
  } else {
    throw InputError("genspec.kind: unknown kind '" + kind + "'");
  }
  spec.node_count = j.value("n", spec.node_count);
  spec.sample_count = j.value("p", spec.sample_count);
  if (j.contains("q")) spec.percentile = rat_from_json(j["q"], "genspec.q");
  spec.edge_density_pct = j.value("edge_density_pct", spec.edge_density_pct);
  spec.min_sources = j.value("min_sources", spec.min_sources);
  spec.max_sources = j.value("max_sources", spec.max_sources);
  spec.min_dests = j.value("min_dests", spec.min_dests);
  spec.max_dests = j.value("max_dests", spec.max_dests);
  std::string pattern = j.value("pattern", "uniform");
  if (pattern == "uniform") {
    spec.pattern = GenSpec::Pattern::Uniform;
  } else if (pattern == "diurnal") {
    spec.pattern = GenSpec::Pattern::Diurnal;
  } else if (pattern == "bursty") {
    spec.pattern = GenSpec::Pattern::Bursty;
  } else {
    throw InputError("genspec.pattern: unknown pattern '" + pattern + "'");
  }
  spec.peak_slots = j.value("peak_slots", spec.peak_slots);
  spec.peak_multiplier = j.value("peak_multiplier", spec.peak_multiplier);
  spec.spike_count = j.value("spike_count", spec.spike_count);
  spec.spike_multiplier = j.value("spike_multiplier", spec.spike_multiplier);
  spec.min_weight = j.value("min_weight", spec.min_weight);
  spec.max_weight = j.value("max_weight", spec.max_weight);
  spec.min_price = j.value("min_price", spec.min_price);
  spec.max_price = j.value("max_price", spec.max_price);
  spec.min_cap = j.value("min_cap", spec.min_cap);
  spec.max_cap = j.value("max_cap", spec.max_cap);
  spec.ensure_feasible = j.value("ensure_feasible", spec.ensure_feasible);
  spec.customers_per_slot = j.value("customers_per_slot", spec.customers_per_slot);
  spec.group_count = j.value("group_count", spec.group_count);
  spec.group_size = j.value("group_size", spec.group_size);
  spec.allow_group_overlap = j.value("allow_group_overlap", spec.allow_group_overlap);
  spec.validate();
  return spec;
}

// Dispatches on the spec kind and returns the matching instance document.
inline json generate_to_json(const GenSpec& spec) {
  switch (spec.kind) {
    case GenSpec::Kind::Generic: return instance_to_json(generate_instance(spec));
    case GenSpec::Kind::Cdn: return cdn_to_json(generate_cdn(spec));
    case GenSpec::Kind::Lvdn: return lvdn_to_json(generate_lvdn(spec));
    case GenSpec::Kind::Rtcn: return rtcn_to_json(generate_rtcn(spec));
    case GenSpec::Kind::CloudWan: return cloudwan_to_json(generate_cloudwan(spec));
  }
  throw InputError("genspec: unhandled kind");
}

// Canonical file form: two-space indent plus trailing newline, keys sorted.
inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace nba
