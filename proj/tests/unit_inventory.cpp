#include <doctest.h>

#include <vector>

#include "edgesim/audit.hpp"
#include "edgesim/inventory.hpp"
#include "edgesim/rng.hpp"

using namespace edgesim;

namespace {

SeatVersion random_version(RngStream& rng) {
  SeatVersion v;
  v.status = static_cast<SeatStatus>(rng.uniform_u64(4));
  const int nodes = 1 + static_cast<int>(rng.uniform_u64(4));
  for (int n = 0; n < nodes; ++n) {
    for (std::uint64_t i = rng.uniform_u64(4); i > 0; --i) v.vv.bump(static_cast<NodeId>(n));
  }
  v.writer = WriterStamp{rng.uniform_u64(1000), static_cast<NodeId>(rng.uniform_u64(4)),
                         rng.next_u64()};
  v.holder = rng.uniform_u64(100);
  return v;
}

SeatRegister reg_of(const SeatVersion& v) {
  SeatRegister r;
  r.insert(v);
  return r;
}

}  // namespace

TEST_CASE("merge is idempotent, commutative and associative (randomized)") {
  RngStream rng(20250810, "merge-algebra");
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const SeatRegister a = reg_of(random_version(rng));
    const SeatRegister b = reg_of(random_version(rng));
    const SeatRegister c = reg_of(random_version(rng));
    if (!(merge(a, a) == a)) ++violations;
    if (!(merge(a, b) == merge(b, a))) ++violations;
    if (!(merge(a, merge(b, c)) == merge(merge(a, b), c))) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("concurrent HELD vs BOOKED resolves to BOOKED") {
  SeatVersion held;
  held.status = SeatStatus::HELD;
  held.vv.bump(1);
  held.writer = {100, 1, 1};
  SeatVersion booked;
  booked.status = SeatStatus::BOOKED;
  booked.vv.bump(2);
  booked.writer = {50, 2, 1};  // even an earlier stamp loses to precedence
  const SeatRegister m = merge(reg_of(held), reg_of(booked));
  CHECK(m.resolved().status == SeatStatus::BOOKED);
  // Version joins both sides.
  CHECK(m.resolved().vv.at(1) == 1);
  CHECK(m.resolved().vv.at(2) == 1);
}

TEST_CASE("a dominating version wins regardless of precedence") {
  SeatVersion booked;
  booked.status = SeatStatus::BOOKED;
  booked.vv.bump(1);
  booked.writer = {10, 1, 1};
  // The same node later released the seat: strictly dominating write.
  SeatVersion released;
  released.status = SeatStatus::AVAILABLE;
  released.vv = booked.vv;
  released.vv.bump(1);
  released.writer = {20, 1, 2};
  const SeatRegister m = merge(reg_of(booked), reg_of(released));
  CHECK(m.resolved().status == SeatStatus::AVAILABLE);
}

TEST_CASE("BOOKED never regresses without a dominating release (randomized)") {
  RngStream rng(7, "regression");
  for (int trial = 0; trial < 10000; ++trial) {
    SeatRegister reg = reg_of(random_version(rng));
    const SeatVersion incoming = random_version(rng);
    const SeatVersion before = reg.resolved();
    SeatRegister after = reg;
    after.insert(incoming);
    const SeatVersion now = after.resolved();
    if (before.status == SeatStatus::BOOKED && now.status == SeatStatus::AVAILABLE) {
      // Only a strictly dominating write may free a booked seat.
      CHECK(incoming.vv.dominates(before.vv));
      CHECK_FALSE(before.vv.dominates(incoming.vv));
    }
  }
}

TEST_CASE("booking lifecycle at the owner") {
  Replica rep(1, false);
  rep.add_flight(0, 2);
  const SeatId seat{0, 0};

  SUBCASE("single request confirms and the seat books") {
    const auto t = rep.book(100, seat, 10);
    CHECK(t.outcome == BookingOutcome::CONFIRMED);
    CHECK(rep.status_of(seat) == SeatStatus::BOOKED);
    CHECK(rep.replay_matches());
  }
  SUBCASE("booking a booked seat is rejected") {
    rep.book(100, seat, 10);
    const auto t = rep.book(101, seat, 20);
    CHECK(t.outcome == BookingOutcome::REJECTED_TAKEN);
  }
  SUBCASE("two concurrent requests: exactly one confirmation, either order") {
    for (int order = 0; order < 2; ++order) {
      Replica r(1, false);
      r.add_flight(0, 2);
      const std::uint64_t first = order == 0 ? 100 : 101;
      const std::uint64_t second = order == 0 ? 101 : 100;
      const auto t1 = r.book(first, seat, 10);
      const auto t2 = r.book(second, seat, 11);
      CHECK(t1.outcome == BookingOutcome::CONFIRMED);
      CHECK(t2.outcome == BookingOutcome::REJECTED_TAKEN);
      int confirmed = 0;
      for (const auto& t : r.ticket_ledger()) {
        if (t.outcome == BookingOutcome::CONFIRMED) ++confirmed;
      }
      CHECK(confirmed == 1);
    }
  }
  SUBCASE("duplicate request id re-serves the original ticket") {
    const auto t1 = rep.book(100, seat, 10);
    const auto t2 = rep.book(100, seat, 50);  // retry of the same request
    CHECK(t1.outcome == t2.outcome);
    CHECK(rep.ticket_ledger().size() == 1);
  }
}

TEST_CASE("cancellation, tombstone and explicit re-release") {
  Replica rep(1, false);
  rep.add_flight(0, 1);
  const SeatId seat{0, 0};
  rep.book(100, seat, 10);
  const auto t = rep.cancel(101, seat, 20);
  CHECK(t.outcome == BookingOutcome::CONFIRMED);
  CHECK(rep.status_of(seat) == SeatStatus::CANCELLED_TOMBSTONE);
  CHECK(rep.release_tombstone(seat, 30));
  CHECK(rep.status_of(seat) == SeatStatus::AVAILABLE);
  // The freed seat can be booked again.
  CHECK(rep.book(102, seat, 40).outcome == BookingOutcome::CONFIRMED);
  CHECK(rep.replay_matches());

  // Cancel of a non-booked seat is rejected.
  Replica rep2(1, false);
  rep2.add_flight(0, 1);
  CHECK(rep2.cancel(1, seat, 5).outcome == BookingOutcome::REJECTED_TAKEN);
}

TEST_CASE("holds expire back to available") {
  Replica rep(1, false);
  rep.add_flight(0, 1);
  const SeatId seat{0, 0};
  CHECK(rep.place_hold(100, seat, 10).outcome == BookingOutcome::CONFIRMED);
  CHECK(rep.status_of(seat) == SeatStatus::HELD);
  // A different request cannot expire someone else's hold.
  CHECK_FALSE(rep.expire_hold(999, seat, 20));
  CHECK(rep.expire_hold(100, seat, 5000010));
  CHECK(rep.status_of(seat) == SeatStatus::AVAILABLE);
  // Finalizing an expired hold fails.
  CHECK(rep.finalize_hold(100, seat, 5000020).outcome == BookingOutcome::REJECTED_TAKEN);
  CHECK(rep.replay_matches());
}

TEST_CASE("confirmation reads the authoritative state") {
  Replica rep(1, false);
  rep.add_flight(0, 1);
  const SeatId seat{0, 0};
  CHECK(rep.confirm(1, seat, 5).outcome == BookingOutcome::REJECTED_TAKEN);
  rep.book(2, seat, 10);
  CHECK(rep.confirm(3, seat, 20).outcome == BookingOutcome::CONFIRMED);
}

TEST_CASE("sync deltas converge a follower, duplicates included") {
  Replica owner(1, false);
  owner.add_flight(0, 4);
  Replica cloud(9, /*track_foreign=*/true);

  owner.book(100, SeatId{0, 2}, 10);
  owner.book(101, SeatId{0, 3}, 12);

  std::size_t end = 0;
  const auto delta = owner.own_entries_since(0, &end);
  CHECK(end == owner.own_write_count());

  cloud.apply_remote(delta);
  CHECK(cloud.status_of(SeatId{0, 2}) == SeatStatus::BOOKED);
  CHECK(cloud.status_of(SeatId{0, 3}) == SeatStatus::BOOKED);

  // At-least-once delivery: applying the same delta twice changes nothing.
  const auto before = cloud.seats();
  cloud.apply_remote(delta);
  CHECK(cloud.seats() == before);
  CHECK(cloud.replay_matches());
  CHECK(check_replicas_converged({&owner, &cloud}).empty());
}

TEST_CASE("stale remote read converges after the next sync") {
  // Two-node interleaving: a booking lands at the owner while a follower
  // still serves AVAILABLE from its cached copy; the next sync converges it.
  Replica owner(1, false);
  owner.add_flight(0, 1);
  Replica follower(2, /*track_foreign=*/true);

  // Follower bootstraps from a full snapshot (empty history).
  std::size_t end = 0;
  follower.apply_remote(owner.own_entries_since(0, &end));
  CHECK(follower.status_of(SeatId{0, 0}) == SeatStatus::AVAILABLE);

  owner.book(100, SeatId{0, 0}, 50);
  // In-flight booking elsewhere: the follower still reads AVAILABLE.
  CHECK(follower.status_of(SeatId{0, 0}) == SeatStatus::AVAILABLE);

  follower.apply_remote(owner.own_entries_since(end, &end));
  CHECK(follower.status_of(SeatId{0, 0}) == SeatStatus::BOOKED);
  CHECK(check_replicas_converged({&owner, &follower}).empty());
}

TEST_CASE("log offsets resume after a dropped delta") {
  Replica owner(1, false);
  owner.add_flight(0, 8);
  Replica peer(2, true);

  owner.book(1, SeatId{0, 0}, 10);
  std::size_t end1 = 0;
  auto delta1 = owner.own_entries_since(0, &end1);
  // delta1 is lost in transit: the acked offset stays 0.

  owner.book(2, SeatId{0, 1}, 20);
  std::size_t end2 = 0;
  auto delta2 = owner.own_entries_since(0, &end2);  // resend from the old offset
  CHECK(delta2.size() > delta1.size());
  peer.apply_remote(delta2);
  CHECK(peer.status_of(SeatId{0, 0}) == SeatStatus::BOOKED);
  CHECK(peer.status_of(SeatId{0, 1}) == SeatStatus::BOOKED);
}

TEST_CASE("event-sourced log replay reproduces live state") {
  RngStream rng(5, "ops");
  Replica rep(1, false);
  rep.add_flight(0, 16);
  for (int i = 0; i < 500; ++i) {
    const SeatId seat{0, static_cast<std::uint32_t>(rng.uniform_u64(16))};
    switch (rng.uniform_u64(3)) {
      case 0: rep.book(1000 + i, seat, 10 + i); break;
      case 1: rep.cancel(1000 + i, seat, 10 + i); break;
      default: rep.release_tombstone(seat, 10 + i); break;
    }
  }
  CHECK(rep.replay_matches());
}
