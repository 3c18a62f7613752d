#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace edgesim {

// One independent random stream per consumer subsystem. The stream is fully
// determined by (seed, stream_id), so adding a consumer never perturbs the
// draws of existing ones. Distribution sampling is hand-rolled on top of the
// raw 64-bit generator to keep sequences identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01();

  // Uniform real in [lo, hi].
  double uniform(double lo, double hi);

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_u64(std::uint64_t n);

  // Exponential with the given mean (> 0).
  double exponential(double mean);

  // True with probability p. Consumes no draw when p is exactly 0 or 1,
  // so disabled features never shift the stream.
  bool bernoulli(double p);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// Stable 64-bit FNV-1a, used for stream derivation and file fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace edgesim
