#pragma once

#include <cstdint>

namespace edgesim {

// Virtual time in integer microseconds. Starts at zero, never decreases.
using SimTime = std::uint64_t;

constexpr SimTime kMicrosPerMilli = 1000;
constexpr SimTime kMicrosPerSecond = 1000000;

constexpr SimTime usec(std::uint64_t v) { return v; }
constexpr SimTime msec(std::uint64_t v) { return v * kMicrosPerMilli; }
constexpr SimTime sec(std::uint64_t v) { return v * kMicrosPerSecond; }

constexpr double to_ms(SimTime t) { return static_cast<double>(t) / 1000.0; }
constexpr double to_s(SimTime t) { return static_cast<double>(t) / 1e6; }

}  // namespace edgesim
