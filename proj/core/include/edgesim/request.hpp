#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "edgesim/sim_time.hpp"
#include "edgesim/trace.hpp"

namespace edgesim {

using RecordId = std::uint32_t;
using FlightId = std::uint32_t;

enum class RequestKind : std::uint8_t {
  AVAILABILITY_CHECK = 0,
  BOOKING = 1,
  CONFIRMATION = 2,
  CANCELLATION = 3,
};
constexpr int kRequestKinds = 4;
std::string_view to_string(RequestKind k);

enum class StageKind : std::uint8_t {
  INGESTION = 0,
  FILTERING = 1,
  AGGREGATION = 2,
  ANALYSIS = 3,
  TEMP_STORAGE = 4,
  CLOUD_SYNC = 5,
};
constexpr int kStageKinds = 6;
std::string_view to_string(StageKind s);

enum class RecordFate : std::uint8_t {
  IN_FLIGHT = 0,
  COMPLETED = 1,       // response arrived back at the user region
  SHED = 2,            // rejected at a full stage queue
  FILTERED = 3,        // dropped by the filtering stage
  FAILED = 4,          // no healthy node to route to / node down at arrival
};

enum class BookingOutcome : std::uint8_t {
  NONE = 0,
  CONFIRMED = 1,
  REJECTED_TAKEN = 2,
  TIMEOUT = 3,
};
std::string_view to_string(BookingOutcome o);

// One reservation-domain request traversing the pipeline. Hop timestamps are
// indexed by StageKind; a zero pair means the stage was never entered
// (creation time zero is excluded by construction: requests are generated at
// t > 0).
struct RequestState {
  RequestKind kind = RequestKind::AVAILABILITY_CHECK;
  RecordFate fate = RecordFate::IN_FLIGHT;
  BookingOutcome outcome = BookingOutcome::NONE;
  bool relevance = true;
  NodeId origin_region = 0;
  NodeId serving_node = 0;
  FlightId flight = 0;
  std::uint32_t seat = 0;
  std::int64_t bytes = 0;
  SimTime created = 0;
  SimTime server_done = 0;  // response left the serving node
  SimTime completed = 0;    // response arrived at the user region
  std::array<SimTime, kStageKinds> hop_enter{};
  std::array<SimTime, kStageKinds> hop_exit{};
  std::uint8_t entered_mask = 0;  // bit per StageKind
  std::uint8_t exited_mask = 0;

  bool entered(StageKind s) const { return entered_mask & (1u << static_cast<int>(s)); }
  bool exited(StageKind s) const { return exited_mask & (1u << static_cast<int>(s)); }
};

}  // namespace edgesim
