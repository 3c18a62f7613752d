#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "edgesim/request.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/sim_time.hpp"

namespace edgesim {

struct PeakInterval {
  SimTime start_us = 0;
  SimTime end_us = 0;
  double multiplier = 1.0;  // >= 1
};

struct WorkloadProfile {
  double base_rate_per_s = 100.0;
  SimTime duration_us = sec(10);
  std::array<double, kRequestKinds> mix{1.0, 0.0, 0.0, 0.0};  // sums to 1
  std::vector<double> region_weights;                         // sums to 1
  std::vector<PeakInterval> peaks;                            // non-overlapping
  // Probability a request targets a flight of its home region's partition.
  double locality = 1.0;
  // Probability a record carries relevance=false and is dropped by filtering.
  double irrelevant_rate = 0.0;
  std::int64_t request_bytes = 512;
  std::int64_t response_bytes = 1024;
};

struct GeneratedRequest {
  SimTime at = 0;
  RequestKind kind = RequestKind::AVAILABILITY_CHECK;
  std::uint32_t region_index = 0;
  bool relevance = true;
  // Flight selection inputs resolved by the scenario driver, which owns the
  // partition map: the raw draws are kept so selection stays in one place.
  bool local_flight = true;
  std::uint64_t flight_draw = 0;
  std::uint64_t seat_draw = 0;
};

// Piecewise-constant-rate Poisson arrival stream. Rate at time t is
// base_rate x multiplier of the covering peak (1 outside peaks). Draw order
// per request is fixed so the stream is reproducible per (seed, stream id).
class WorkloadGenerator {
 public:
  WorkloadGenerator(const WorkloadProfile& profile, RngStream& rng);

  // Next arrival strictly after the previous one, or false at end of stream.
  bool next(GeneratedRequest* out);

 private:
  double rate_at(SimTime t) const;
  SimTime segment_end(SimTime t) const;

  const WorkloadProfile& profile_;
  RngStream& rng_;
  double t_us_ = 0;  // continuous arrival-walk position
};

}  // namespace edgesim
