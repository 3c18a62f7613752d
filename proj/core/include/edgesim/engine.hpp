#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edgesim/sim_time.hpp"
#include "edgesim/trace.hpp"

namespace edgesim {

// Deterministic discrete-event core. Events are totally ordered by
// (fire_at, seq) where seq is the scheduling sequence number, so ties at the
// same timestamp fire in FIFO scheduling order. Single-threaded by contract;
// parallelism only across engines that share nothing.
class Engine {
 public:
  explicit Engine(TraceSink* trace = nullptr) : trace_(trace) {}

  SimTime now() const { return now_; }

  // Enqueues fn to run at now + delay_us. Rejects negative delay.
  // Returns the event's sequence number (its handle).
  std::uint64_t schedule(std::int64_t delay_us, NodeId target, const char* action,
                         std::function<void()> fn);

  // Processes every event with fire_at <= horizon in total order, then
  // advances the clock to the horizon. Returns the number processed.
  std::uint64_t run_until(SimTime horizon);

  // Appends a free-form trace record attributed to the event being executed.
  void annotate(NodeId target, std::string_view action);

  std::uint64_t events_processed() const { return processed_; }
  std::uint64_t events_scheduled() const { return next_seq_; }
  bool queue_empty() const { return heap_.empty(); }

  TraceSink* trace() { return trace_; }

 private:
  struct Ev {
    SimTime at;
    std::uint64_t seq;
    NodeId target;
    const char* action;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Ev& a, const Ev& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  std::vector<Ev> heap_;
  TraceSink* trace_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t cur_seq_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace edgesim
