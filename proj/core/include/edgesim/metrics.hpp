#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgesim/inventory.hpp"
#include "edgesim/request.hpp"
#include "edgesim/sim_time.hpp"

namespace edgesim {

struct LatencyStats {
  std::uint64_t count = 0;
  double mean_ms = 0;
  double p50_ms = 0;
  double p95_ms = 0;
  double p99_ms = 0;
  double max_ms = 0;
};

// Nearest-rank percentile over raw samples (microseconds in, stats in ms).
LatencyStats summarize_us(std::vector<std::uint64_t> samples);

struct ScaleEvent {
  SimTime at = 0;
  std::string node;
  StageKind stage = StageKind::INGESTION;
  int from = 0;
  int to = 0;
};

struct ScenarioReport {
  std::string scenario;
  std::string architecture;  // "edge" | "centralized"
  std::uint64_t seed = 0;
  std::string config_hash;          // of the scenario file bytes
  std::string workload_fingerprint; // of the workload + seed; compare guard
  SimTime horizon_us = 0;

  std::uint64_t generated = 0;
  std::uint64_t completed = 0;
  std::uint64_t shed = 0;
  std::uint64_t filtered = 0;
  std::uint64_t failed = 0;
  std::uint64_t in_flight = 0;

  // Latency: request creation to response leaving the serving node.
  LatencyStats latency_overall;
  std::map<std::string, LatencyStats> latency_by_kind;
  // Response time: request creation to response arrival at the user region.
  LatencyStats response_overall;

  double throughput_per_s = 0;
  std::optional<double> satisfaction;
  double satisfaction_slo_hit_fraction = 0;
  double satisfaction_completion_fraction = 0;

  std::uint64_t bookings_confirmed = 0;
  std::uint64_t bookings_rejected = 0;
  std::uint64_t bookings_timeout = 0;

  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  double max_read_staleness_ms = 0;
  double read_staleness_bound_ms = 0;

  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t unsynced_batches = 0;
  std::uint64_t archived_records = 0;

  double resource_seconds = 0;
  std::map<std::string, std::uint64_t> routed_by_node;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> cache_by_node;  // hits, misses
  std::vector<ScaleEvent> scale_events;
};

struct ComparisonReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string config_hash;
  double latency_reduction_pct = 0;   // (base - edge) / base
  double throughput_gain_pct = 0;     // (edge - base) / base
  std::optional<double> satisfaction_gain_pct;
  double baseline_latency_ms = 0;
  double edge_latency_ms = 0;
  double baseline_throughput_per_s = 0;
  double edge_throughput_per_s = 0;
};

struct MetricsParams {
  SimTime slo_us = msec(500);
  double weight_slo = 0.7;
  double weight_completion = 0.3;
};

// Weighted blend of SLO-hit fraction and completion rate; the satisfaction
// proxy (the underlying study metric is not independently defined).
// Returns nullopt when nothing was generated.
std::optional<double> satisfaction_score(std::uint64_t generated, std::uint64_t completed,
                                         std::uint64_t within_slo, const MetricsParams& params);

// Percentage deltas, edge vs centralized baseline. Throws std::invalid_argument
// when the two reports do not come from the same seed and workload.
ComparisonReport compare_reports(const ScenarioReport& baseline, const ScenarioReport& edge);

// Per-request sample sink; the runner feeds it and builds the report at the
// horizon. Aggregation after the run is pure.
class Collector {
 public:
  std::vector<RequestState>& requests() { return requests_; }
  const std::vector<RequestState>& requests() const { return requests_; }

  RecordId new_request(RequestState st) {
    requests_.push_back(st);
    return static_cast<RecordId>(requests_.size() - 1);
  }
  RequestState& at(RecordId id) { return requests_[id]; }

  void record_read_staleness(SimTime staleness_us) {
    if (staleness_us > max_staleness_us_) max_staleness_us_ = staleness_us;
    ++reads_;
  }
  void record_ticket(const BookingTicket& t) { tickets_.push_back(t); }
  void record_scale(ScaleEvent ev) { scale_events_.push_back(std::move(ev)); }
  void count_cache(bool hit) { hit ? ++cache_hits_ : ++cache_misses_; }
  void count_unsynced() { ++unsynced_; }
  void count_archived(std::uint64_t n) { archived_ += n; }
  void record_archive_lag(SimTime lag_us) {
    if (lag_us > max_archive_lag_us_) max_archive_lag_us_ = lag_us;
  }

  SimTime max_read_staleness_us() const { return max_staleness_us_; }
  SimTime max_archive_lag_us() const { return max_archive_lag_us_; }
  const std::vector<BookingTicket>& tickets() const { return tickets_; }
  const std::vector<ScaleEvent>& scale_events() const { return scale_events_; }
  std::uint64_t cache_hits() const { return cache_hits_; }
  std::uint64_t cache_misses() const { return cache_misses_; }
  std::uint64_t unsynced_batches() const { return unsynced_; }
  std::uint64_t archived() const { return archived_; }

 private:
  std::vector<RequestState> requests_;
  std::vector<BookingTicket> tickets_;
  std::vector<ScaleEvent> scale_events_;
  SimTime max_staleness_us_ = 0;
  SimTime max_archive_lag_us_ = 0;
  std::uint64_t reads_ = 0;
  std::uint64_t cache_hits_ = 0;
  std::uint64_t cache_misses_ = 0;
  std::uint64_t unsynced_ = 0;
  std::uint64_t archived_ = 0;
};

}  // namespace edgesim
