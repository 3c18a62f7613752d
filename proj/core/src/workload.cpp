#include "edgesim/workload.hpp"

#include <cmath>

namespace edgesim {

WorkloadGenerator::WorkloadGenerator(const WorkloadProfile& profile, RngStream& rng)
    : profile_(profile), rng_(rng) {}

double WorkloadGenerator::rate_at(SimTime t) const {
  double m = 1.0;
  for (const auto& p : profile_.peaks) {
    if (t >= p.start_us && t < p.end_us) {
      m = p.multiplier;
      break;
    }
  }
  return profile_.base_rate_per_s * m / 1e6;  // per microsecond
}

SimTime WorkloadGenerator::segment_end(SimTime t) const {
  SimTime end = profile_.duration_us;
  for (const auto& p : profile_.peaks) {
    if (t < p.start_us) end = std::min(end, p.start_us);
    else if (t < p.end_us) end = std::min(end, p.end_us);
  }
  return end;
}

bool WorkloadGenerator::next(GeneratedRequest* out) {
  // Exponential gaps within each constant-rate segment; by memorylessness the
  // walk restarts cleanly at every segment boundary.
  while (true) {
    const SimTime tick = static_cast<SimTime>(t_us_);
    if (tick >= profile_.duration_us) return false;
    const double rate = rate_at(tick);
    const SimTime seg_end = segment_end(tick);
    const double gap = rng_.exponential(1.0 / rate);
    if (t_us_ + gap >= static_cast<double>(seg_end)) {
      t_us_ = static_cast<double>(seg_end);
      continue;
    }
    t_us_ += gap;
    break;
  }

  out->at = static_cast<SimTime>(t_us_);

  // Kind draw.
  {
    double u = rng_.uniform01();
    int k = 0;
    for (; k < kRequestKinds - 1; ++k) {
      if (u < profile_.mix[k]) break;
      u -= profile_.mix[k];
    }
    out->kind = static_cast<RequestKind>(k);
  }
  // Region draw.
  {
    double u = rng_.uniform01();
    std::uint32_t r = 0;
    for (; r + 1 < profile_.region_weights.size(); ++r) {
      if (u < profile_.region_weights[r]) break;
      u -= profile_.region_weights[r];
    }
    out->region_index = r;
  }
  out->relevance = !rng_.bernoulli(profile_.irrelevant_rate);
  out->local_flight = profile_.locality >= 1.0 ? true : rng_.bernoulli(profile_.locality);
  out->flight_draw = rng_.next_u64();
  out->seat_draw = rng_.next_u64();
  return true;
}

}  // namespace edgesim
