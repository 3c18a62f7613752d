#include "edgesim/pipeline.hpp"

#include <cassert>
#include <stdexcept>

namespace edgesim {

std::string_view to_string(RequestKind k) {
  switch (k) {
    case RequestKind::AVAILABILITY_CHECK: return "availability_check";
    case RequestKind::BOOKING: return "booking";
    case RequestKind::CONFIRMATION: return "confirmation";
    case RequestKind::CANCELLATION: return "cancellation";
  }
  return "?";
}

std::string_view to_string(StageKind s) {
  switch (s) {
    case StageKind::INGESTION: return "ingestion";
    case StageKind::FILTERING: return "filtering";
    case StageKind::AGGREGATION: return "aggregation";
    case StageKind::ANALYSIS: return "analysis";
    case StageKind::TEMP_STORAGE: return "temp_storage";
    case StageKind::CLOUD_SYNC: return "cloud_sync";
  }
  return "?";
}

std::string_view to_string(BookingOutcome o) {
  switch (o) {
    case BookingOutcome::NONE: return "none";
    case BookingOutcome::CONFIRMED: return "confirmed";
    case BookingOutcome::REJECTED_TAKEN: return "rejected_taken";
    case BookingOutcome::TIMEOUT: return "timeout";
  }
  return "?";
}

std::int64_t ServiceSpec::sample_us(RngStream& rng) const {
  switch (kind) {
    case Kind::FIXED:
      return a_us;
    case Kind::EXPONENTIAL:
      return static_cast<std::int64_t>(rng.exponential(static_cast<double>(a_us)));
    case Kind::UNIFORM:
      return static_cast<std::int64_t>(
          rng.uniform(static_cast<double>(a_us), static_cast<double>(b_us)));
  }
  return a_us;
}

double ServiceSpec::mean_us() const {
  switch (kind) {
    case Kind::FIXED:
    case Kind::EXPONENTIAL:
      return static_cast<double>(a_us);
    case Kind::UNIFORM:
      return 0.5 * static_cast<double>(a_us + b_us);
  }
  return 0;
}

Stage::Stage(Engine& engine, RngStream& svc_rng, NodeId node, StageKind kind, StageParams params)
    : engine_(engine),
      rng_(svc_rng),
      node_(node),
      kind_(kind),
      params_(params),
      instances_(params.instances),
      last_accum_(engine.now()) {
  if (params.instances < 1) throw std::invalid_argument("stage instances must be >= 1");
}

void Stage::accumulate(SimTime now) {
  const double dt = static_cast<double>(now - last_accum_);
  busy_us_ += dt * static_cast<double>(busy_);
  capacity_us_ += dt * static_cast<double>(instances_);
  elapsed_us_ += dt;
  total_instance_us_ += dt * static_cast<double>(instances_);
  last_accum_ = now;
}

void Stage::offer(StageJob job) {
  if (busy_ < instances_) {
    queue_.push_back(std::move(job));
    start_next();
    return;
  }
  if (queue_.size() < static_cast<std::size_t>(params_.queue_capacity)) {
    queue_.push_back(std::move(job));
    return;
  }
  ++jobs_shed_;
  if (on_shed_) on_shed_(std::move(job));
}

void Stage::start_next() {
  while (busy_ < instances_ && !queue_.empty()) {
    accumulate(engine_.now());
    StageJob job = std::move(queue_.front());
    queue_.pop_front();
    ++busy_;
    const std::int64_t svc = params_.service.sample_us(rng_);
    engine_.schedule(svc, node_, "svc_done", [this, job = std::move(job)]() mutable {
      accumulate(engine_.now());
      --busy_;
      ++jobs_done_;
      // Refill the freed server before handing the job downstream, so the
      // work-conservation invariant holds whenever control leaves the stage.
      start_next();
      if (on_done_) on_done_(std::move(job));
    });
  }
  // Work conservation: an idle instance with a waiting job never persists.
  assert(queue_.empty() || busy_ >= instances_);
}

void Stage::set_instances(int n) {
  if (n < 1) n = 1;
  accumulate(engine_.now());
  instances_ = n;
  start_next();
}

Stage::WindowStats Stage::take_window(SimTime now) {
  accumulate(now);
  WindowStats w;
  w.utilization = capacity_us_ > 0 ? busy_us_ / capacity_us_ : 0.0;
  w.avg_busy = elapsed_us_ > 0 ? busy_us_ / elapsed_us_ : 0.0;
  busy_us_ = 0;
  capacity_us_ = 0;
  elapsed_us_ = 0;
  return w;
}

double Stage::instance_seconds(SimTime now) const {
  const double dt = static_cast<double>(now - last_accum_);
  return (total_instance_us_ + dt * static_cast<double>(instances_)) / 1e6;
}

AggregationWindow::AggregationWindow(Engine& engine, NodeId node, int close_count,
                                     std::int64_t timeout_us, CloseFn on_close)
    : engine_(engine),
      node_(node),
      close_count_(close_count),
      timeout_us_(timeout_us),
      on_close_(std::move(on_close)) {
  if (close_count_ < 1) throw std::invalid_argument("window close count must be >= 1");
}

void AggregationWindow::add(RecordId id) {
  if (members_.empty() && close_count_ > 1) {
    const std::uint64_t gen = window_gen_;
    engine_.schedule(timeout_us_, node_, "agg_window_timeout", [this, gen] {
      if (gen == window_gen_ && !members_.empty()) close();
    });
  }
  members_.push_back(id);
  if (static_cast<int>(members_.size()) >= close_count_) close();
}

void AggregationWindow::close() {
  ++window_gen_;
  std::vector<RecordId> batch;
  batch.swap(members_);
  on_close_(std::move(batch));
}

}  // namespace edgesim
