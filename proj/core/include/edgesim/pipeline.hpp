#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "edgesim/engine.hpp"
#include "edgesim/request.hpp"
#include "edgesim/rng.hpp"

namespace edgesim {

// Service time distribution for one stage.
struct ServiceSpec {
  enum class Kind : std::uint8_t { FIXED, EXPONENTIAL, UNIFORM } kind = Kind::FIXED;
  std::int64_t a_us = 0;  // FIXED value / EXPONENTIAL mean / UNIFORM lo
  std::int64_t b_us = 0;  // UNIFORM hi

  std::int64_t sample_us(RngStream& rng) const;
  double mean_us() const;
};

struct StageParams {
  ServiceSpec service;
  int instances = 1;
  int queue_capacity = 1024;
};

// A unit of work occupying one stage server: a single record, or the batch
// formed by an aggregation window travelling as one job.
struct StageJob {
  std::vector<RecordId> members;
  std::int64_t bytes = 0;
};

// M-server FIFO queue with bounded waiting room. Jobs past capacity are shed.
// Instance count is mutable at runtime (autoscaling); shrinking never preempts
// jobs already in service.
class Stage {
 public:
  using DoneFn = std::function<void(StageJob&&)>;
  using ShedFn = std::function<void(StageJob&&)>;

  Stage(Engine& engine, RngStream& svc_rng, NodeId node, StageKind kind, StageParams params);

  void set_on_done(DoneFn fn) { on_done_ = std::move(fn); }
  void set_on_shed(ShedFn fn) { on_shed_ = std::move(fn); }

  void offer(StageJob job);
  void set_instances(int n);

  StageKind kind() const { return kind_; }
  int instances() const { return instances_; }
  int busy() const { return busy_; }
  std::size_t queue_len() const { return queue_.size(); }
  // Queue depth plus jobs in service; the load balancer's per-stage signal.
  std::size_t backlog() const { return queue_.size() + static_cast<std::size_t>(busy_); }

  std::uint64_t jobs_done() const { return jobs_done_; }
  std::uint64_t jobs_shed() const { return jobs_shed_; }

  struct WindowStats {
    double utilization = 0;  // busy-time / capacity-time over the window
    double avg_busy = 0;     // busy-server-time / elapsed, the offered load
  };
  // Drains the accumulated window. avg_busy is the instance-count-free load
  // signal; utilization relative to a count that changed mid-window would
  // misestimate it.
  WindowStats take_window(SimTime now);
  // Provisioned instance-seconds since construction.
  double instance_seconds(SimTime now) const;

 private:
  void start_next();
  void accumulate(SimTime now);

  Engine& engine_;
  RngStream& rng_;
  NodeId node_;
  StageKind kind_;
  StageParams params_;
  int instances_;
  int busy_ = 0;
  std::deque<StageJob> queue_;
  DoneFn on_done_;
  ShedFn on_shed_;
  std::uint64_t jobs_done_ = 0;
  std::uint64_t jobs_shed_ = 0;

  SimTime last_accum_ = 0;
  double busy_us_ = 0;      // window busy-server-microseconds
  double capacity_us_ = 0;  // window instance-microseconds
  double elapsed_us_ = 0;   // window wall microseconds
  double total_instance_us_ = 0;
};

// Count-or-timeout aggregation window, one per request kind at each node.
// Members joining after a window closed always land in the next window.
class AggregationWindow {
 public:
  using CloseFn = std::function<void(std::vector<RecordId>&&)>;

  AggregationWindow(Engine& engine, NodeId node, int close_count, std::int64_t timeout_us,
                    CloseFn on_close);

  void add(RecordId id);
  std::size_t pending() const { return members_.size(); }

 private:
  void close();

  Engine& engine_;
  NodeId node_;
  int close_count_;
  std::int64_t timeout_us_;
  CloseFn on_close_;
  std::vector<RecordId> members_;
  std::uint64_t window_gen_ = 0;  // invalidates stale timeout events
};

}  // namespace edgesim
