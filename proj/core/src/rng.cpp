#include "edgesim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace edgesim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed, std::string_view stream_id)
    : seed_(seed), gen_(splitmix64(seed ^ fnv1a64(stream_id))) {}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::uniform_u64(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_u64: n must be > 0");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

double RngStream::exponential(double mean) {
  if (mean <= 0.0) throw std::invalid_argument("exponential: mean must be > 0");
  double u;
  do {
    u = uniform01();
  } while (u <= 0.0);
  return -mean * std::log(u);
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

}  // namespace edgesim
