#pragma once

#include <string>
#include <vector>

#include "edgesim/config.hpp"
#include "edgesim/metrics.hpp"

namespace edgesim {

// Decision-node policy: which pipeline terminal a record takes after
// analysis. The default sends reads to the local terminal and state-changing
// finalizations to cloud sync. The inventory operation itself is always
// dictated by the request kind; the verdict only selects terminal and
// archival, so a constant-LOCAL policy silences cloud-sync traffic without
// breaking bookings.
enum class DecisionPolicyKind : std::uint8_t { DEFAULT, ALL_LOCAL, ALL_CLOUD };

enum class Verdict : std::uint8_t { LOCAL, CLOUD };
Verdict decide(RequestKind kind, DecisionPolicyKind policy);

struct RunOutput {
  ScenarioReport report;
  std::string trace_text;                 // empty unless tracing was enabled
  std::vector<std::string> audit_violations;
  // True when the run ended write-quiescent with no message loss, so the
  // cross-replica convergence check was performed (its failures land in
  // audit_violations).
  bool convergence_checked = false;
};

struct RunOptions {
  bool trace = false;
  DecisionPolicyKind decision_policy = DecisionPolicyKind::DEFAULT;
};

// Executes one architecture of the scenario on an isolated engine. Runs that
// share a config and seed are independent and may execute in parallel.
RunOutput run_scenario(const ScenarioConfig& cfg, Architecture arch, RunOptions opts = {});

}  // namespace edgesim
