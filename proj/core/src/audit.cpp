#include "edgesim/audit.hpp"

#include <map>
#include <set>
#include <sstream>

namespace edgesim {

namespace {

void check_stats_ordering(const LatencyStats& s, const std::string& label,
                          std::vector<std::string>& out) {
  if (s.count == 0) return;
  if (!(s.p50_ms <= s.p95_ms && s.p95_ms <= s.p99_ms && s.p99_ms <= s.max_ms)) {
    out.push_back("percentile ordering violated in " + label);
  }
}

// Legal owner-authored transitions of the seat state machine.
bool legal_transition(SeatStatus from, InventoryOp op, SeatStatus to) {
  switch (op) {
    case InventoryOp::HOLD:
      return from == SeatStatus::AVAILABLE && to == SeatStatus::HELD;
    case InventoryOp::BOOK:
      return from == SeatStatus::HELD && to == SeatStatus::BOOKED;
    case InventoryOp::EXPIRE:
      return from == SeatStatus::HELD && to == SeatStatus::AVAILABLE;
    case InventoryOp::CANCEL:
      return from == SeatStatus::BOOKED && to == SeatStatus::CANCELLED_TOMBSTONE;
    case InventoryOp::RELEASE:
      return from == SeatStatus::CANCELLED_TOMBSTONE && to == SeatStatus::AVAILABLE;
    case InventoryOp::CONFIRM:
      return false;  // never logged
  }
  return false;
}

}  // namespace

std::vector<std::string> audit_run(const AuditInputs& in) {
  std::vector<std::string> out;
  if (!in.collector || !in.report) {
    out.push_back("auditor missing inputs");
    return out;
  }
  const auto& requests = in.collector->requests();

  // --- per-record stage order and hop monotonicity ---
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    const bool term_local = r.entered(StageKind::TEMP_STORAGE);
    const bool term_cloud = r.entered(StageKind::CLOUD_SYNC);
    if (term_local && term_cloud) {
      out.push_back("record " + std::to_string(i) + " reached both terminals");
      continue;
    }
    // Entered stages must be a prefix of the chain.
    static constexpr StageKind kChain[4] = {StageKind::INGESTION, StageKind::FILTERING,
                                            StageKind::AGGREGATION, StageKind::ANALYSIS};
    bool prefix_broken = false;
    bool seen_gap = false;
    for (StageKind s : kChain) {
      if (r.entered(s)) {
        if (seen_gap) prefix_broken = true;
      } else {
        seen_gap = true;
      }
    }
    if ((term_local || term_cloud) && seen_gap) prefix_broken = true;
    if (prefix_broken) {
      out.push_back("record " + std::to_string(i) + " skipped a pipeline stage");
      continue;
    }
    SimTime prev_exit = 0;
    for (int s = 0; s < kStageKinds; ++s) {
      const StageKind sk = static_cast<StageKind>(s);
      if (!r.entered(sk)) continue;
      if (r.exited(sk) && r.hop_exit[s] < r.hop_enter[s]) {
        out.push_back("record " + std::to_string(i) + " exits " +
                      std::string(to_string(sk)) + " before entering");
      }
      if (r.hop_enter[s] < prev_exit) {
        out.push_back("record " + std::to_string(i) + " enters " +
                      std::string(to_string(sk)) + " before leaving the previous stage");
      }
      if (r.exited(sk)) prev_exit = r.hop_exit[s];
    }
    if (r.fate == RecordFate::COMPLETED && r.completed < r.created) {
      out.push_back("record " + std::to_string(i) + " completed before creation");
    }
  }

  // --- conservation ---
  const auto& rep = *in.report;
  if (rep.completed + rep.shed + rep.filtered + rep.failed + rep.in_flight != rep.generated) {
    out.push_back("request conservation violated: completed + shed + filtered + failed + "
                  "in-flight != generated");
  }
  if (rep.generated != requests.size()) {
    out.push_back("report generated count does not match the trace");
  }

  // --- percentile ordering ---
  check_stats_ordering(rep.latency_overall, "latency.overall", out);
  check_stats_ordering(rep.response_overall, "response.overall", out);
  for (const auto& [k, s] : rep.latency_by_kind) check_stats_ordering(s, "latency." + k, out);

  // --- booking safety ---
  std::set<std::uint64_t> seen_requests;
  std::map<std::uint64_t, std::uint64_t> confirmed_per_seat;
  for (const auto& t : in.collector->tickets()) {
    if (!seen_requests.insert(t.request).second) {
      out.push_back("request " + std::to_string(t.request) + " received two outcomes");
    }
    if (t.op == InventoryOp::BOOK && t.outcome == BookingOutcome::CONFIRMED) {
      ++confirmed_per_seat[t.seat.key()];
    }
  }
  std::map<std::uint64_t, std::uint64_t> releases_per_seat;
  for (const Replica* r : in.replicas) {
    for (const auto& e : r->log()) {
      if (e.origin != r->node()) continue;
      if (e.op == InventoryOp::RELEASE || e.op == InventoryOp::EXPIRE) {
        ++releases_per_seat[e.seat.key()];
      }
    }
  }
  for (const auto& [seat, confirmed] : confirmed_per_seat) {
    const std::uint64_t allowed = 1 + releases_per_seat[seat];
    if (confirmed > allowed) {
      std::ostringstream os;
      os << "seat " << (seat >> 32) << "/" << (seat & 0xffffffffu) << " confirmed " << confirmed
         << " times with only " << (allowed - 1) << " releases";
      out.push_back(os.str());
    }
  }

  // --- owner-log state machine + replay ---
  for (const Replica* r : in.replicas) {
    std::map<std::uint64_t, SeatStatus> state;
    for (const auto& e : r->log()) {
      if (e.origin != r->node()) continue;
      auto& cur = state.try_emplace(e.seat.key(), SeatStatus::AVAILABLE).first->second;
      if (!legal_transition(cur, e.op, e.version.status)) {
        std::ostringstream os;
        os << "replica " << r->node() << ": illegal transition " << to_string(cur) << " -"
           << to_string(e.op) << "-> " << to_string(e.version.status);
        out.push_back(os.str());
      }
      cur = e.version.status;
    }
    if (!r->replay_matches()) {
      out.push_back("replica " + std::to_string(r->node()) +
                    ": log replay does not reproduce live state");
    }
  }

  // --- follower never causally ahead of the owner ---
  for (const Replica* follower : in.replicas) {
    for (const auto& [key, reg] : follower->seats()) {
      const FlightId flight = static_cast<FlightId>(key >> 32);
      if (follower->owns(flight)) continue;
      for (const Replica* owner : in.replicas) {
        if (!owner->owns(flight)) continue;
        auto oit = owner->seats().find(key);
        if (oit == owner->seats().end()) break;
        if (!oit->second.resolved().vv.dominates(reg.resolved().vv)) {
          out.push_back("follower " + std::to_string(follower->node()) +
                        " is causally ahead of the owner for seat key " + std::to_string(key));
        }
        break;
      }
    }
  }

  // --- read staleness bound ---
  if (rep.max_read_staleness_ms > rep.read_staleness_bound_ms) {
    std::ostringstream os;
    os << "read staleness " << rep.max_read_staleness_ms << " ms exceeds the bound "
       << rep.read_staleness_bound_ms << " ms";
    out.push_back(os.str());
  }

  return out;
}

std::vector<std::string> check_replicas_converged(const std::vector<const Replica*>& replicas) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < replicas.size(); ++i) {
    for (std::size_t j = i + 1; j < replicas.size(); ++j) {
      const auto& a = replicas[i]->seats();
      const auto& b = replicas[j]->seats();
      for (const auto& [key, reg] : a) {
        auto it = b.find(key);
        if (it == b.end()) continue;
        if (reg.resolved().status != it->second.resolved().status) {
          std::ostringstream os;
          os << "replicas " << replicas[i]->node() << " and " << replicas[j]->node()
             << " disagree on seat key " << key << ": " << to_string(reg.resolved().status)
             << " vs " << to_string(it->second.resolved().status);
          out.push_back(os.str());
        }
      }
    }
  }
  return out;
}

}  // namespace edgesim
