#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "nba/model.hpp"
#include "nba/scenarios/lvdn.hpp"

namespace nba {

// Real-time communication: participants form groups; within a group every
// participant sends to all the others through exactly one ingest server.
struct RtcnInstance {
  int server_count = 0;          // servers 1..n
  std::vector<Rat> unit_price;
  std::vector<Rat> egress_cap;
  BillingConfig billing;

  struct Participant {
    NodeId id = 0;               // n+1 .. n+m^(t)
    Rat weight;                  // w_s^(t)
  };
  struct Slot {
    int slot = 0;
    std::set<Edge> edges;                    // E^(t) over servers and participants
    std::vector<Participant> participants;   // S^(t)
    std::vector<std::vector<NodeId>> groups;  // A^(t)
  };
  std::vector<Slot> slots;

  void validate() const {
    if (server_count <= 0) throw InputError("rtcn: need at least one server");
    if (static_cast<int>(unit_price.size()) != server_count ||
        static_cast<int>(egress_cap.size()) != server_count) {
      throw InputError("rtcn: per-server arrays must have one entry per server");
    }
    for (int i = 0; i < server_count; ++i) {
      if (unit_price[static_cast<size_t>(i)] <= Rat(0) ||
          egress_cap[static_cast<size_t>(i)] <= Rat(0)) {
        throw InputError("rtcn: prices and capacities must be positive");
      }
    }
    billing.validate();
    if (static_cast<int>(slots.size()) != billing.sample_count) {
      throw InputError("rtcn: expected one slot entry per sample");
    }
    for (int t = 1; t <= billing.sample_count; ++t) {
      const Slot& sl = slots[static_cast<size_t>(t - 1)];
      if (sl.slot != t) throw InputError("rtcn: slot " + std::to_string(t) + " mislabeled");
      std::set<NodeId> ids;
      for (size_t i = 0; i < sl.participants.size(); ++i) {
        const Participant& pt = sl.participants[i];
        if (pt.id != server_count + static_cast<int>(i) + 1) {
          throw InputError("rtcn: participant ids in slot " + std::to_string(t) +
                           " must be n+1..n+m");
        }
        if (pt.weight <= Rat(0)) throw InputError("rtcn: participant weight must be positive");
        ids.insert(pt.id);
      }
      for (const auto& group : sl.groups) {
        if (group.empty()) {
          throw InputError("rtcn: slot " + std::to_string(t) +
                           " has an empty group (no communication demand)");
        }
        if (group.size() < 2) {
          throw InputError("rtcn: slot " + std::to_string(t) +
                           " has a singleton group (no communication demand)");
        }
        std::set<NodeId> members;
        for (NodeId s : group) {
          if (ids.count(s) == 0) {
            throw InputError("rtcn: group member " + std::to_string(s) +
                             " is not a participant of slot " + std::to_string(t));
          }
          if (!members.insert(s).second) {
            throw InputError("rtcn: duplicate group member " + std::to_string(s));
          }
        }
      }
    }
  }
};

// Expansion: every (participant, group) pair becomes a producer whose
// viewers are the rest of the group. A participant in several groups emits
// one producer demand per group, each with its own ingest edge; whether the
// groups could share one ingest is left open upstream, so the split form is
// used. Participants get fresh producer ids per demand plus one viewer alias
// per slot, which keeps producers and viewers disjoint as the target model
// requires. Edges are relabeled accordingly; direct participant-participant
// edges cannot satisfy coverage (delivery is counted from servers) and are
// dropped.
inline LvdnInstance rtcn_expand(const RtcnInstance& rtcn) {
  rtcn.validate();

  LvdnInstance lvdn;
  lvdn.server_count = rtcn.server_count;
  lvdn.unit_price = rtcn.unit_price;
  lvdn.egress_cap = rtcn.egress_cap;
  lvdn.billing = rtcn.billing;

  NodeId fresh = rtcn.server_count;
  for (const auto& sl : rtcn.slots) {
    for (const auto& pt : sl.participants) fresh = std::max(fresh, pt.id);
  }

  for (int t = 1; t <= rtcn.billing.sample_count; ++t) {
    const RtcnInstance::Slot& sl = rtcn.slots[static_cast<size_t>(t - 1)];
    LvdnInstance::Slot out;
    out.slot = t;

    std::map<NodeId, Rat> weight_of;
    for (const auto& pt : sl.participants) weight_of[pt.id] = pt.weight;

    // Producer alias per (group, member), viewer alias per participant.
    std::map<std::pair<size_t, NodeId>, NodeId> producer_alias;
    std::map<NodeId, NodeId> viewer_alias;
    for (size_t g = 0; g < sl.groups.size(); ++g) {
      for (NodeId s : sl.groups[g]) producer_alias[{g, s}] = ++fresh;
    }
    for (const auto& pt : sl.participants) viewer_alias[pt.id] = ++fresh;

    for (size_t g = 0; g < sl.groups.size(); ++g) {
      for (NodeId s : sl.groups[g]) {
        LvdnInstance::Demand d;
        d.producer = producer_alias.at({g, s});
        d.weight = weight_of.at(s);
        for (NodeId other : sl.groups[g]) {
          if (other != s) d.viewers.insert(viewer_alias.at(other));
        }
        out.producers.push_back(std::move(d));
      }
    }

    auto is_server = [&](NodeId v) { return v >= 1 && v <= rtcn.server_count; };
    for (const Edge& e : sl.edges) {
      if (is_server(e.tail) && is_server(e.head)) {
        out.edges.insert(e);
      } else if (!is_server(e.tail) && is_server(e.head)) {
        for (size_t g = 0; g < sl.groups.size(); ++g) {
          auto it = producer_alias.find({g, e.tail});
          if (it != producer_alias.end()) out.edges.insert({it->second, e.head});
        }
      } else if (is_server(e.tail) && !is_server(e.head)) {
        auto it = viewer_alias.find(e.head);
        if (it != viewer_alias.end()) out.edges.insert({e.tail, it->second});
      }
      // participant -> participant: dropped
    }
    lvdn.slots.push_back(std::move(out));
  }
  lvdn.validate();
  return lvdn;
}

}  // namespace nba
