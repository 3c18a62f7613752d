#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edgesim/request.hpp"
#include "edgesim/sim_time.hpp"

namespace edgesim {

struct SeatId {
  FlightId flight = 0;
  std::uint32_t seat = 0;

  std::uint64_t key() const { return (static_cast<std::uint64_t>(flight) << 32) | seat; }
  auto operator<=>(const SeatId&) const = default;
};

enum class SeatStatus : std::uint8_t {
  AVAILABLE = 0,
  HELD = 1,
  BOOKED = 2,
  CANCELLED_TOMBSTONE = 3,
};
std::string_view to_string(SeatStatus s);

// Concurrent-version precedence: BOOKED > CANCELLED_TOMBSTONE > HELD >
// AVAILABLE, so the strong path's outcome can never be overturned by the
// eventual path.
int status_precedence(SeatStatus s);

// Per-replica counters; partial order by pointwise comparison.
class VersionVec {
 public:
  void bump(NodeId node) { ++counts_[node]; }
  std::uint64_t at(NodeId node) const;
  void join(const VersionVec& other);  // pointwise max

  // a.dominates(b): a >= b pointwise (includes equality).
  bool dominates(const VersionVec& other) const;
  bool same(const VersionVec& other) const { return counts_ == other.counts_; }

  const std::map<NodeId, std::uint64_t>& counts() const { return counts_; }

 private:
  std::map<NodeId, std::uint64_t> counts_;
};

// Totally ordered write stamp: (virtual time, node, per-node op counter).
struct WriterStamp {
  SimTime at = 0;
  NodeId node = 0;
  std::uint64_t op = 0;
  auto operator<=>(const WriterStamp&) const = default;
};

// One written version of a seat's state.
struct SeatVersion {
  SeatStatus status = SeatStatus::AVAILABLE;
  VersionVec vv;
  WriterStamp writer;
  std::uint64_t holder = 0;  // request id when HELD/BOOKED
};

// Multi-version register: the set of pairwise-concurrent versions seen so
// far. Dominated versions are pruned on insert; the effective state resolves
// concurrency by status precedence, then writer stamp. Insert is commutative,
// associative and idempotent, so merge order and duplicate delivery cannot
// change the outcome.
class SeatRegister {
 public:
  // Returns true if the insert changed the register.
  bool insert(const SeatVersion& v);

  // Effective state: payload of the winning sibling, version = join of all.
  SeatVersion resolved() const;

  const std::vector<SeatVersion>& siblings() const { return siblings_; }
  bool operator==(const SeatRegister& other) const;

 private:
  std::vector<SeatVersion> siblings_;
};

// Convenience over registers holding a single version each.
SeatRegister merge(const SeatRegister& a, const SeatRegister& b);

// HOLD..EXPIRE appear in replica logs; CONFIRM is a read-only strong
// operation and only ever tags tickets.
enum class InventoryOp : std::uint8_t {
  HOLD = 0,
  BOOK = 1,
  CANCEL = 2,
  RELEASE = 3,
  EXPIRE = 4,
  CONFIRM = 5,
};
std::string_view to_string(InventoryOp op);

struct LogEntry {
  std::uint64_t lsn = 0;       // position in this replica's applied log
  NodeId origin = 0;           // replica that authored the write
  InventoryOp op = InventoryOp::BOOK;
  SeatId seat;
  SeatVersion version;
  SimTime at = 0;
};

struct BookingTicket {
  std::uint64_t request = 0;
  SeatId seat;
  BookingOutcome outcome = BookingOutcome::NONE;
  SimTime decided_at = 0;
  NodeId coordinator = 0;
  InventoryOp op = InventoryOp::BOOK;  // which strong operation produced it
};

struct SeatSnapshot {
  SeatId seat;
  SeatStatus status = SeatStatus::AVAILABLE;
};

struct FlightSnapshot {
  FlightId flight = 0;
  std::vector<SeatSnapshot> seats;  // ordered by seat index
};

// Geo-partitioned replica: owner of the flights in its partition (all strong
// operations for those flights are serialized here), with an append-only log
// of every applied operation. Replaying the log from empty reproduces the
// live seat state.
class Replica {
 public:
  Replica(NodeId node, bool track_foreign);

  NodeId node() const { return node_; }

  void add_flight(FlightId flight, std::uint32_t seats);
  bool owns(FlightId flight) const { return owned_.count(flight) != 0; }
  const std::set<FlightId>& owned_flights() const { return owned_; }

  // --- strong path (must be the owner; callers route to the owner first) ---
  BookingTicket book(std::uint64_t request, SeatId seat, SimTime now);
  BookingTicket cancel(std::uint64_t request, SeatId seat, SimTime now);
  BookingTicket confirm(std::uint64_t request, SeatId seat, SimTime now);
  // Two-phase surface: place a hold that expires unless finalized.
  BookingTicket place_hold(std::uint64_t request, SeatId seat, SimTime now);
  BookingTicket finalize_hold(std::uint64_t request, SeatId seat, SimTime now);
  // Reverts HELD -> AVAILABLE if the hold with this request id still stands.
  bool expire_hold(std::uint64_t request, SeatId seat, SimTime now);
  // Explicit re-release: CANCELLED_TOMBSTONE -> AVAILABLE.
  bool release_tombstone(SeatId seat, SimTime now);

  // Duplicate strong requests re-serve the recorded ticket (at-most-once
  // outcome per request id).
  std::optional<BookingTicket> ticket_for(std::uint64_t request) const;

  // --- eventual path ---
  std::optional<FlightSnapshot> snapshot(FlightId flight) const;
  SeatStatus status_of(SeatId seat) const;

  // --- sync ---
  // Own-authored entries in [from, to) of the own-write sequence.
  std::vector<LogEntry> own_entries_since(std::size_t from, std::size_t* end) const;
  // Applies remote entries via register merge. Foreign-flight entries are
  // applied only when track_foreign is set (the cloud archive tracks all).
  // Returns the number of entries that changed state.
  std::size_t apply_remote(const std::vector<LogEntry>& entries);

  const std::vector<LogEntry>& log() const { return log_; }
  std::size_t own_write_count() const { return own_writes_.size(); }

  // Event-sourcing check: fold the applied log from empty and compare.
  bool replay_matches() const;

  const std::map<std::uint64_t, SeatRegister>& seats() const { return seats_; }
  const std::vector<BookingTicket>& ticket_ledger() const { return ledger_; }

 private:
  SeatVersion make_version(SeatStatus st, const SeatRegister& reg, std::uint64_t holder,
                           SimTime now);
  void apply_own(InventoryOp op, SeatId seat, const SeatVersion& v, SimTime now);
  BookingTicket reply(std::uint64_t request, SeatId seat, BookingOutcome out, SimTime now,
                      InventoryOp op);

  NodeId node_;
  bool track_foreign_;
  std::set<FlightId> owned_;
  std::map<FlightId, std::uint32_t> flight_seats_;
  std::map<std::uint64_t, SeatRegister> seats_;  // key = SeatId::key()
  std::vector<LogEntry> log_;                    // everything applied here
  std::vector<std::size_t> own_writes_;          // indices into log_
  std::uint64_t op_counter_ = 0;
  std::map<std::uint64_t, BookingTicket> tickets_;
  std::vector<BookingTicket> ledger_;
};

}  // namespace edgesim
