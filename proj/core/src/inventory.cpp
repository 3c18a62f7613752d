#include "edgesim/inventory.hpp"

#include <algorithm>
#include <tuple>
#include <cassert>
#include <stdexcept>

namespace edgesim {

std::string_view to_string(SeatStatus s) {
  switch (s) {
    case SeatStatus::AVAILABLE: return "available";
    case SeatStatus::HELD: return "held";
    case SeatStatus::BOOKED: return "booked";
    case SeatStatus::CANCELLED_TOMBSTONE: return "tombstone";
  }
  return "?";
}

std::string_view to_string(InventoryOp op) {
  switch (op) {
    case InventoryOp::HOLD: return "hold";
    case InventoryOp::BOOK: return "book";
    case InventoryOp::CANCEL: return "cancel";
    case InventoryOp::RELEASE: return "release";
    case InventoryOp::EXPIRE: return "expire";
    case InventoryOp::CONFIRM: return "confirm";
  }
  return "?";
}

int status_precedence(SeatStatus s) {
  switch (s) {
    case SeatStatus::BOOKED: return 3;
    case SeatStatus::CANCELLED_TOMBSTONE: return 2;
    case SeatStatus::HELD: return 1;
    case SeatStatus::AVAILABLE: return 0;
  }
  return -1;
}

std::uint64_t VersionVec::at(NodeId node) const {
  auto it = counts_.find(node);
  return it == counts_.end() ? 0 : it->second;
}

void VersionVec::join(const VersionVec& other) {
  for (const auto& [n, c] : other.counts_) {
    auto& mine = counts_[n];
    mine = std::max(mine, c);
  }
}

bool VersionVec::dominates(const VersionVec& other) const {
  for (const auto& [n, c] : other.counts_) {
    if (at(n) < c) return false;
  }
  return true;
}

bool SeatRegister::insert(const SeatVersion& v) {
  // The register keeps the maximal elements of every version seen, so it is
  // a set union followed by pruning: order of inserts and duplicate delivery
  // cannot change the final contents.
  for (const auto& s : siblings_) {
    const bool s_dom = s.vv.dominates(v.vv);
    const bool v_dom = v.vv.dominates(s.vv);
    if (s_dom && v_dom) {
      // Identical vectors: an exact duplicate is a no-op; distinct writers
      // with the same causal footprint stay as siblings.
      if (s.writer == v.writer && s.status == v.status && s.holder == v.holder) return false;
    } else if (s_dom) {
      return false;  // strictly dominated by an existing version
    }
  }
  std::erase_if(siblings_, [&](const SeatVersion& s) {
    return v.vv.dominates(s.vv) && !s.vv.dominates(v.vv);
  });
  siblings_.push_back(v);
  // Deterministic sibling order regardless of arrival order.
  std::sort(siblings_.begin(), siblings_.end(), [](const SeatVersion& a, const SeatVersion& b) {
    return std::tie(a.writer, a.status, a.holder) < std::tie(b.writer, b.status, b.holder);
  });
  return true;
}

SeatVersion SeatRegister::resolved() const {
  if (siblings_.empty()) return SeatVersion{};
  const SeatVersion* win = &siblings_.front();
  for (const auto& s : siblings_) {
    const int ps = status_precedence(s.status);
    const int pw = status_precedence(win->status);
    if (ps > pw || (ps == pw && s.writer > win->writer)) win = &s;
  }
  SeatVersion out = *win;
  for (const auto& s : siblings_) out.vv.join(s.vv);
  return out;
}

bool SeatRegister::operator==(const SeatRegister& other) const {
  if (siblings_.size() != other.siblings_.size()) return false;
  for (std::size_t i = 0; i < siblings_.size(); ++i) {
    const auto& a = siblings_[i];
    const auto& b = other.siblings_[i];
    if (a.status != b.status || a.writer != b.writer || a.holder != b.holder ||
        !a.vv.same(b.vv))
      return false;
  }
  return true;
}

SeatRegister merge(const SeatRegister& a, const SeatRegister& b) {
  SeatRegister out = a;
  for (const auto& v : b.siblings()) out.insert(v);
  return out;
}

Replica::Replica(NodeId node, bool track_foreign) : node_(node), track_foreign_(track_foreign) {}

void Replica::add_flight(FlightId flight, std::uint32_t seats) {
  owned_.insert(flight);
  flight_seats_[flight] = seats;
  for (std::uint32_t s = 0; s < seats; ++s) {
    seats_.emplace(SeatId{flight, s}.key(), SeatRegister{});
  }
}

SeatVersion Replica::make_version(SeatStatus st, const SeatRegister& reg, std::uint64_t holder,
                                  SimTime now) {
  SeatVersion v = reg.resolved();
  v.status = st;
  v.holder = holder;
  v.vv.bump(node_);
  v.writer = WriterStamp{now, node_, ++op_counter_};
  return v;
}

void Replica::apply_own(InventoryOp op, SeatId seat, const SeatVersion& v, SimTime now) {
  auto& reg = seats_[seat.key()];
  reg.insert(v);
  log_.push_back(LogEntry{log_.size(), node_, op, seat, v, now});
  own_writes_.push_back(log_.size() - 1);
}

BookingTicket Replica::reply(std::uint64_t request, SeatId seat, BookingOutcome out, SimTime now,
                             InventoryOp op) {
  BookingTicket t{request, seat, out, now, node_, op};
  auto [it, inserted] = tickets_.emplace(request, t);
  if (!inserted) return it->second;  // one outcome per request id
  ledger_.push_back(t);
  return t;
}

BookingTicket Replica::book(std::uint64_t request, SeatId seat, SimTime now) {
  if (auto prev = ticket_for(request)) return *prev;
  if (!owns(seat.flight)) throw std::logic_error("book: not the partition owner");
  auto it = seats_.find(seat.key());
  if (it == seats_.end()) return reply(request, seat, BookingOutcome::REJECTED_TAKEN, now,
                                       InventoryOp::BOOK);
  auto& reg = it->second;
  if (reg.resolved().status != SeatStatus::AVAILABLE) {
    return reply(request, seat, BookingOutcome::REJECTED_TAKEN, now, InventoryOp::BOOK);
  }
  // Per-seat lock is implicit: the owner serializes all writes to its
  // partition, and the hold/book pair is applied atomically in its log.
  apply_own(InventoryOp::HOLD, seat, make_version(SeatStatus::HELD, reg, request, now), now);
  apply_own(InventoryOp::BOOK, seat, make_version(SeatStatus::BOOKED, reg, request, now), now);
  return reply(request, seat, BookingOutcome::CONFIRMED, now, InventoryOp::BOOK);
}

BookingTicket Replica::cancel(std::uint64_t request, SeatId seat, SimTime now) {
  if (auto prev = ticket_for(request)) return *prev;
  if (!owns(seat.flight)) throw std::logic_error("cancel: not the partition owner");
  auto it = seats_.find(seat.key());
  if (it == seats_.end()) return reply(request, seat, BookingOutcome::REJECTED_TAKEN, now,
                                       InventoryOp::CANCEL);
  auto& reg = it->second;
  if (reg.resolved().status != SeatStatus::BOOKED) {
    return reply(request, seat, BookingOutcome::REJECTED_TAKEN, now, InventoryOp::CANCEL);
  }
  apply_own(InventoryOp::CANCEL, seat,
            make_version(SeatStatus::CANCELLED_TOMBSTONE, reg, request, now), now);
  return reply(request, seat, BookingOutcome::CONFIRMED, now, InventoryOp::CANCEL);
}

BookingTicket Replica::confirm(std::uint64_t request, SeatId seat, SimTime now) {
  if (auto prev = ticket_for(request)) return *prev;
  if (!owns(seat.flight)) throw std::logic_error("confirm: not the partition owner");
  auto it = seats_.find(seat.key());
  const bool booked =
      it != seats_.end() && it->second.resolved().status == SeatStatus::BOOKED;
  return reply(request, seat, booked ? BookingOutcome::CONFIRMED : BookingOutcome::REJECTED_TAKEN,
               now, InventoryOp::CONFIRM);
}

BookingTicket Replica::place_hold(std::uint64_t request, SeatId seat, SimTime now) {
  if (auto prev = ticket_for(request)) return *prev;
  if (!owns(seat.flight)) throw std::logic_error("hold: not the partition owner");
  auto& reg = seats_[seat.key()];
  if (reg.resolved().status != SeatStatus::AVAILABLE) {
    return reply(request, seat, BookingOutcome::REJECTED_TAKEN, now, InventoryOp::HOLD);
  }
  apply_own(InventoryOp::HOLD, seat, make_version(SeatStatus::HELD, reg, request, now), now);
  return reply(request, seat, BookingOutcome::CONFIRMED, now, InventoryOp::HOLD);
}

BookingTicket Replica::finalize_hold(std::uint64_t request, SeatId seat, SimTime now) {
  auto& reg = seats_[seat.key()];
  const SeatVersion cur = reg.resolved();
  if (cur.status != SeatStatus::HELD || cur.holder != request) {
    return BookingTicket{request, seat, BookingOutcome::REJECTED_TAKEN, now, node_,
                         InventoryOp::BOOK};
  }
  apply_own(InventoryOp::BOOK, seat, make_version(SeatStatus::BOOKED, reg, request, now), now);
  return BookingTicket{request, seat, BookingOutcome::CONFIRMED, now, node_, InventoryOp::BOOK};
}

bool Replica::expire_hold(std::uint64_t request, SeatId seat, SimTime now) {
  auto& reg = seats_[seat.key()];
  const SeatVersion cur = reg.resolved();
  if (cur.status != SeatStatus::HELD || cur.holder != request) return false;
  apply_own(InventoryOp::EXPIRE, seat, make_version(SeatStatus::AVAILABLE, reg, 0, now), now);
  return true;
}

bool Replica::release_tombstone(SeatId seat, SimTime now) {
  auto& reg = seats_[seat.key()];
  if (reg.resolved().status != SeatStatus::CANCELLED_TOMBSTONE) return false;
  apply_own(InventoryOp::RELEASE, seat, make_version(SeatStatus::AVAILABLE, reg, 0, now), now);
  return true;
}

std::optional<BookingTicket> Replica::ticket_for(std::uint64_t request) const {
  auto it = tickets_.find(request);
  if (it == tickets_.end()) return std::nullopt;
  return it->second;
}

std::optional<FlightSnapshot> Replica::snapshot(FlightId flight) const {
  auto it = flight_seats_.find(flight);
  if (it == flight_seats_.end()) return std::nullopt;
  FlightSnapshot snap;
  snap.flight = flight;
  snap.seats.reserve(it->second);
  for (std::uint32_t s = 0; s < it->second; ++s) {
    const SeatId id{flight, s};
    auto reg = seats_.find(id.key());
    snap.seats.push_back(SeatSnapshot{
        id, reg == seats_.end() ? SeatStatus::AVAILABLE : reg->second.resolved().status});
  }
  return snap;
}

SeatStatus Replica::status_of(SeatId seat) const {
  auto it = seats_.find(seat.key());
  return it == seats_.end() ? SeatStatus::AVAILABLE : it->second.resolved().status;
}

std::vector<LogEntry> Replica::own_entries_since(std::size_t from, std::size_t* end) const {
  std::vector<LogEntry> out;
  for (std::size_t i = from; i < own_writes_.size(); ++i) out.push_back(log_[own_writes_[i]]);
  if (end) *end = own_writes_.size();
  return out;
}

std::size_t Replica::apply_remote(const std::vector<LogEntry>& entries) {
  std::size_t changed = 0;
  for (const auto& e : entries) {
    if (!owns(e.seat.flight) && !track_foreign_) continue;
    auto& reg = seats_[e.seat.key()];
    if (reg.insert(e.version)) {
      log_.push_back(LogEntry{log_.size(), e.origin, e.op, e.seat, e.version, e.at});
      ++changed;
    }
  }
  return changed;
}

bool Replica::replay_matches() const {
  std::map<std::uint64_t, SeatRegister> rebuilt;
  for (const auto& [k, reg] : seats_) rebuilt.emplace(k, SeatRegister{});
  for (const auto& e : log_) rebuilt[e.seat.key()].insert(e.version);
  return rebuilt == seats_;
}

}  // namespace edgesim
