#pragma once

#include <string>
#include <vector>

#include "edgesim/inventory.hpp"
#include "edgesim/metrics.hpp"

namespace edgesim {

struct AuditInputs {
  const Collector* collector = nullptr;
  const ScenarioReport* report = nullptr;
  std::vector<const Replica*> replicas;
};

// Post-run auditor. Re-derives the invariants from the collected trace and
// final replica state; returns one message per violation (empty = clean).
//
// Checks: stage-order prefix and hop monotonicity per record, request
// conservation, percentile ordering, at-most-one outcome per request id,
// per-seat confirmed bookings <= 1 + explicit releases, owner-log state
// machine legality, event-sourcing replay, read-staleness bound, and that no
// follower replica is ever causally ahead of a seat's owner.
std::vector<std::string> audit_run(const AuditInputs& in);

// Quiescent-consistency check: every seat tracked by two replicas resolves to
// the same status. Meaningful only after writes stop and sync completes.
std::vector<std::string> check_replicas_converged(const std::vector<const Replica*>& replicas);

}  // namespace edgesim
