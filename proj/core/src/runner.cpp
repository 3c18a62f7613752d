#include "edgesim/runner.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

#include "edgesim/audit.hpp"
#include "edgesim/engine.hpp"
#include "edgesim/network.hpp"
#include "edgesim/orchestration.hpp"
#include "edgesim/pipeline.hpp"
#include "edgesim/workload.hpp"

namespace edgesim {

Verdict decide(RequestKind kind, DecisionPolicyKind policy) {
  switch (policy) {
    case DecisionPolicyKind::ALL_LOCAL: return Verdict::LOCAL;
    case DecisionPolicyKind::ALL_CLOUD: return Verdict::CLOUD;
    case DecisionPolicyKind::DEFAULT: break;
  }
  // Reads stay local; finalized orders sync to the cloud to keep regions
  // consistent.
  return kind == RequestKind::AVAILABILITY_CHECK ? Verdict::LOCAL : Verdict::CLOUD;
}

namespace {

struct FlightInfo {
  std::string name;
  std::uint32_t seats = 0;
  std::uint32_t partition = 0;
  NodeId owner_node = 0;  // arch-dependent coordinator
};

struct CachedFlight {
  FlightSnapshot snap;
  SimTime as_of = 0;  // freshness of the data itself
};

// Per-compute-node runtime: the six-stage pipeline, the inventory replica,
// the foreign-read cache, the archive batcher, and autoscalers.
struct NodeRt {
  NodeId id = 0;
  bool is_cloud = false;
  bool down = false;

  std::array<std::unique_ptr<Stage>, kStageKinds> stages;
  std::map<RequestKind, std::unique_ptr<AggregationWindow>> windows;
  std::unique_ptr<Replica> replica;
  std::unique_ptr<LruTtlCache<FlightId, CachedFlight>> cache;
  std::map<NodeId, SimTime> freshness;  // per peer: send time of last applied sync

  // Archive batching (pipeline cloud-sync terminal).
  std::vector<RecordId> archive_buffer;
  std::int64_t archive_bytes = 0;
  std::uint64_t archive_seq = 0;
  bool archive_inflight = false;
  std::uint64_t arrivals_this_period = 0;

  // Inventory sync bookkeeping (sender side).
  std::map<NodeId, std::size_t> acked_offset;

  std::array<std::unique_ptr<Autoscaler>, kStageKinds> scalers;
};

class ScenarioRun {
 public:
  ScenarioRun(const ScenarioConfig& cfg, Architecture arch, RunOptions opts)
      : cfg_(cfg),
        arch_(arch),
        opts_(opts),
        engine_(opts.trace ? &trace_ : nullptr),
        rng_workload_(cfg.seed, "workload"),
        rng_network_(cfg.seed, "network"),
        rng_service_(cfg.seed, "service-times") {}

  RunOutput execute();

 private:
  void build_topology();
  void build_flights();
  void build_nodes();
  void build_router();
  void wire_pipeline(NodeRt& n);
  void schedule_timers();
  void schedule_next_arrival();

  NodeRt& rt(NodeId id) { return *by_id_.at(id); }
  NodeId owner_node(FlightId f) const { return flights_[f].owner_node; }

  void on_generated(const GeneratedRequest& g);
  void on_request_at_node(RecordId id);
  void stage_enter(RecordId id, StageKind st);
  void stage_exit(RecordId id, StageKind st);
  void after_analysis(NodeRt& n, RecordId id);
  void do_read(NodeRt& n, RecordId id);
  void do_strong(NodeRt& n, RecordId id);
  void attempt_strong(NodeRt& n, RecordId id);
  void on_ticket(RecordId id, const BookingTicket& t);
  void proceed_to_terminal(RecordId id);
  void respond(NodeRt& n, RecordId id);

  void flush_archive(NodeRt& n);
  void send_archive_batch(NodeRt& n, std::uint64_t seq, int attempt);
  void sync_tick(NodeRt& n);
  void autoscale_tick(NodeRt& n, StageKind st);

  BookingTicket apply_strong_op(Replica& rep, RecordId id, SimTime now);

  ScenarioReport build_report();

  const ScenarioConfig& cfg_;
  Architecture arch_;
  RunOptions opts_;
  TraceSink trace_;
  Engine engine_;
  RngStream rng_workload_;
  RngStream rng_network_;
  RngStream rng_service_;

  Topology topo_;
  std::unique_ptr<Network> net_;
  std::vector<NodeId> region_nodes_;
  std::vector<NodeId> edge_nodes_;
  NodeId cloud_node_ = 0;

  std::vector<FlightInfo> flights_;
  std::vector<std::vector<FlightId>> partition_flights_;
  std::map<std::string, std::uint32_t> partition_by_owner_name_;
  std::map<NodeId, std::uint32_t> home_partition_of_region_;

  std::vector<std::unique_ptr<NodeRt>> nodes_;
  std::map<NodeId, NodeRt*> by_id_;
  std::vector<NodeId> compute_nodes_;

  std::unique_ptr<Router> router_;
  std::unique_ptr<WorkloadGenerator> gen_;
  WorkloadProfile profile_;
  Collector collector_;

  struct PendingStrong {
    int tries = 0;
    bool done = false;
  };
  std::map<RecordId, PendingStrong> pending_;

  std::map<std::pair<NodeId, std::uint64_t>, bool> archive_seen_;  // at-least-once dedupe
};

void ScenarioRun::build_topology() {
  for (const auto& r : cfg_.topology.regions) {
    region_nodes_.push_back(topo_.add_node(NodeInfo{r.name, NodeKind::REGION, r.coord, {}}));
  }
  if (arch_ != Architecture::CENTRALIZED) {
    for (const auto& e : cfg_.topology.edges) {
      auto region = topo_.find(e.region);
      edge_nodes_.push_back(topo_.add_node(NodeInfo{e.name, NodeKind::EDGE, e.coord, region}));
    }
  }
  cloud_node_ = topo_.add_node(
      NodeInfo{cfg_.topology.cloud.name, NodeKind::CLOUD, cfg_.topology.cloud.coord, {}});
  for (const auto& l : cfg_.topology.links) {
    auto a = topo_.find(l.a);
    auto b = topo_.find(l.b);
    if (!a || !b) continue;  // endpoint absent from this architecture (edges, centralized run)
    topo_.add_link(*a, *b, cfg_.topology.link_classes.at(l.link_class));
  }
  net_ = std::make_unique<Network>(topo_, engine_, rng_network_);
}

void ScenarioRun::build_flights() {
  partition_flights_.resize(cfg_.inventory.partitions.size());
  for (std::uint32_t p = 0; p < cfg_.inventory.partitions.size(); ++p) {
    const auto& part = cfg_.inventory.partitions[p];
    partition_by_owner_name_[part.owner] = p;
    for (const auto& f : part.flights) {
      FlightInfo fi;
      fi.name = f.id;
      fi.seats = f.seats;
      fi.partition = p;
      flights_.push_back(fi);
      partition_flights_[p].push_back(static_cast<FlightId>(flights_.size() - 1));
    }
  }
  // Home partition of a region: the partition owned by the edge placed there.
  for (const auto& e : cfg_.topology.edges) {
    auto it = partition_by_owner_name_.find(e.name);
    if (it == partition_by_owner_name_.end()) continue;
    if (auto region = topo_.find(e.region)) home_partition_of_region_.emplace(*region, it->second);
  }
  for (std::uint32_t p = 0; p < cfg_.inventory.partitions.size(); ++p) {
    NodeId owner = cloud_node_;
    if (arch_ != Architecture::CENTRALIZED) {
      if (auto n = topo_.find(cfg_.inventory.partitions[p].owner)) owner = *n;
    }
    for (FlightId f : partition_flights_[p]) flights_[f].owner_node = owner;
  }
}

void ScenarioRun::wire_pipeline(NodeRt& n) {
  auto& stages = n.stages;
  const NodeId id = n.id;

  stages[0]->set_on_done([this, id](StageJob&& job) {
    for (RecordId r : job.members) stage_exit(r, StageKind::INGESTION);
    for (RecordId r : job.members) stage_enter(r, StageKind::FILTERING);
    rt(id).stages[1]->offer(std::move(job));
  });
  stages[1]->set_on_done([this, id](StageJob&& job) {
    auto& node = rt(id);
    for (RecordId r : job.members) {
      stage_exit(r, StageKind::FILTERING);
      auto& st = collector_.at(r);
      if (!st.relevance) {
        st.fate = RecordFate::FILTERED;
        engine_.annotate(id, "filter_drop");
        continue;
      }
      stage_enter(r, StageKind::AGGREGATION);
      node.windows.at(st.kind)->add(r);
    }
  });
  stages[2]->set_on_done([this, id](StageJob&& job) {
    for (RecordId r : job.members) {
      stage_exit(r, StageKind::AGGREGATION);
      auto& st = collector_.at(r);
      st.bytes = static_cast<std::int64_t>(static_cast<double>(st.bytes) *
                                           cfg_.pipeline.compression_factor);
      stage_enter(r, StageKind::ANALYSIS);
    }
    rt(id).stages[3]->offer(std::move(job));
  });
  stages[3]->set_on_done([this, id](StageJob&& job) {
    auto& node = rt(id);
    for (RecordId r : job.members) {
      stage_exit(r, StageKind::ANALYSIS);
      after_analysis(node, r);
    }
  });
  stages[4]->set_on_done([this, id](StageJob&& job) {
    auto& node = rt(id);
    for (RecordId r : job.members) {
      stage_exit(r, StageKind::TEMP_STORAGE);
      respond(node, r);
    }
  });
  stages[5]->set_on_done([this, id](StageJob&& job) {
    auto& node = rt(id);
    for (RecordId r : job.members) {
      stage_exit(r, StageKind::CLOUD_SYNC);
      node.archive_buffer.push_back(r);
      node.archive_bytes += collector_.at(r).bytes;
      respond(node, r);
    }
  });

  for (int s = 0; s < kStageKinds; ++s) {
    stages[s]->set_on_shed([this, id](StageJob&& job) {
      for (RecordId r : job.members) {
        collector_.at(r).fate = RecordFate::SHED;
        engine_.annotate(id, "shed");
      }
    });
  }

  // One aggregation window per request kind, so a consolidated batch carries
  // a single kind and one decision verdict.
  for (int k = 0; k < kRequestKinds; ++k) {
    n.windows.emplace(
        static_cast<RequestKind>(k),
        std::make_unique<AggregationWindow>(
            engine_, id, cfg_.pipeline.window.count, cfg_.pipeline.window.timeout_us,
            [this, id](std::vector<RecordId>&& members) {
              StageJob job;
              std::int64_t sum = 0;
              for (RecordId r : members) sum += collector_.at(r).bytes;
              job.bytes = static_cast<std::int64_t>(static_cast<double>(sum) *
                                                    cfg_.pipeline.compression_factor);
              job.members = std::move(members);
              rt(id).stages[2]->offer(std::move(job));
            }));
  }
}

void ScenarioRun::build_nodes() {
  if (arch_ != Architecture::CENTRALIZED) {
    for (NodeId e : edge_nodes_) compute_nodes_.push_back(e);
  }
  compute_nodes_.push_back(cloud_node_);

  for (NodeId id : compute_nodes_) {
    auto n = std::make_unique<NodeRt>();
    n->id = id;
    n->is_cloud = id == cloud_node_;
    for (int s = 0; s < kStageKinds; ++s) {
      n->stages[s] = std::make_unique<Stage>(engine_, rng_service_, id,
                                             static_cast<StageKind>(s), cfg_.pipeline.stages[s]);
      if (cfg_.orchestration.autoscaler.enabled) {
        n->scalers[s] = std::make_unique<Autoscaler>(cfg_.orchestration.autoscaler);
      }
    }
    n->replica = std::make_unique<Replica>(id, /*track_foreign=*/n->is_cloud);
    n->cache = std::make_unique<LruTtlCache<FlightId, CachedFlight>>(
        cfg_.orchestration.cache.capacity, cfg_.orchestration.cache.ttl_us);
    by_id_[id] = n.get();
    nodes_.push_back(std::move(n));
  }

  for (FlightId f = 0; f < flights_.size(); ++f) {
    rt(flights_[f].owner_node).replica->add_flight(f, flights_[f].seats);
  }
  for (auto& n : nodes_) wire_pipeline(*n);
}

void ScenarioRun::build_router() {
  std::vector<NodeId> candidates =
      arch_ == Architecture::CENTRALIZED ? std::vector<NodeId>{cloud_node_} : edge_nodes_;
  router_ = std::make_unique<Router>(topo_, cfg_.orchestration.routing, std::move(candidates),
                                     [this](NodeId n) {
                                       double total = 0;
                                       for (const auto& st : rt(n).stages)
                                         total += static_cast<double>(st->backlog());
                                       return total;
                                     });
}

void ScenarioRun::stage_enter(RecordId id, StageKind st) {
  auto& r = collector_.at(id);
  r.hop_enter[static_cast<int>(st)] = engine_.now();
  r.entered_mask |= static_cast<std::uint8_t>(1u << static_cast<int>(st));
}

void ScenarioRun::stage_exit(RecordId id, StageKind st) {
  auto& r = collector_.at(id);
  r.hop_exit[static_cast<int>(st)] = engine_.now();
  r.exited_mask |= static_cast<std::uint8_t>(1u << static_cast<int>(st));
}

void ScenarioRun::schedule_next_arrival() {
  GeneratedRequest g;
  if (!gen_->next(&g)) return;
  const std::int64_t delay = static_cast<std::int64_t>(g.at - std::min(g.at, engine_.now()));
  engine_.schedule(delay, kSimNode, "arrival", [this, g] {
    on_generated(g);
    schedule_next_arrival();
  });
}

void ScenarioRun::on_generated(const GeneratedRequest& g) {
  RequestState st;
  st.kind = g.kind;
  st.relevance = g.relevance;
  st.origin_region = region_nodes_[g.region_index % region_nodes_.size()];
  st.created = engine_.now();
  st.bytes = profile_.request_bytes;

  // Flight selection is architecture independent: the home partition when the
  // locality draw says so, otherwise uniform over the remaining flights.
  if (!flights_.empty()) {
    const auto home = home_partition_of_region_.find(st.origin_region);
    FlightId flight = 0;
    const bool has_home =
        home != home_partition_of_region_.end() && !partition_flights_[home->second].empty();
    if (g.local_flight && has_home) {
      const auto& fl = partition_flights_[home->second];
      flight = fl[g.flight_draw % fl.size()];
    } else if (has_home && flights_.size() > partition_flights_[home->second].size()) {
      const auto& hp = partition_flights_[home->second];
      std::size_t pick = g.flight_draw % (flights_.size() - hp.size());
      for (FlightId f = 0; f < flights_.size(); ++f) {
        if (flights_[f].partition == home->second) continue;
        if (pick-- == 0) {
          flight = f;
          break;
        }
      }
    } else {
      flight = static_cast<FlightId>(g.flight_draw % flights_.size());
    }
    st.flight = flight;
    st.seat = static_cast<std::uint32_t>(g.seat_draw % flights_[flight].seats);
  }

  const RecordId id = collector_.new_request(st);
  auto target = router_->route(st.origin_region, engine_.now());
  if (!target) {
    collector_.at(id).fate = RecordFate::FAILED;
    engine_.annotate(kSimNode, "route_failed");
    return;
  }
  collector_.at(id).serving_node = *target;
  rt(*target).arrivals_this_period += 1;
  net_->deliver(st.origin_region, *target, profile_.request_bytes, "request",
                [this, id] { on_request_at_node(id); });
}

void ScenarioRun::on_request_at_node(RecordId id) {
  auto& st = collector_.at(id);
  auto& node = rt(st.serving_node);
  if (node.down) {
    st.fate = RecordFate::FAILED;
    engine_.annotate(node.id, "node_down_reject");
    return;
  }
  stage_enter(id, StageKind::INGESTION);
  node.stages[0]->offer(StageJob{{id}, st.bytes});
}

void ScenarioRun::after_analysis(NodeRt& n, RecordId id) {
  auto& st = collector_.at(id);
  if (opts_.trace) {
    engine_.annotate(n.id, decide(st.kind, opts_.decision_policy) == Verdict::LOCAL
                               ? "decide_local"
                               : "decide_cloud");
  }
  if (st.kind == RequestKind::AVAILABILITY_CHECK) {
    do_read(n, id);
  } else {
    do_strong(n, id);
  }
}

// ---- eventual read path ----

void ScenarioRun::do_read(NodeRt& n, RecordId id) {
  auto& st = collector_.at(id);
  const NodeId owner = owner_node(st.flight);
  if (owner == n.id) {
    collector_.record_read_staleness(0);
    proceed_to_terminal(id);
    return;
  }
  const SimTime now = engine_.now();
  if (CachedFlight* hit = n.cache->get(st.flight, now)) {
    // Data is as fresh as the later of its fetch and the last applied sync
    // from the owner (an empty delta confirms no newer writes existed).
    SimTime as_of = hit->as_of;
    auto fit = n.freshness.find(owner);
    if (fit != n.freshness.end()) as_of = std::max(as_of, fit->second);
    collector_.record_read_staleness(now - std::min(now, as_of));
    proceed_to_terminal(id);
    return;
  }
  // Miss: fetch from the owning replica, one round trip, staleness 0.
  do_strong(n, id);
}

// ---- strong path ----

void ScenarioRun::do_strong(NodeRt& n, RecordId id) {
  pending_[id] = PendingStrong{};
  attempt_strong(n, id);
}

BookingTicket ScenarioRun::apply_strong_op(Replica& rep, RecordId id, SimTime now) {
  auto& st = collector_.at(id);
  const SeatId seat{st.flight, st.seat};
  switch (st.kind) {
    case RequestKind::BOOKING:
      return rep.book(id, seat, now);
    case RequestKind::CANCELLATION: {
      auto t = rep.cancel(id, seat, now);
      if (t.outcome == BookingOutcome::CONFIRMED) {
        const NodeId owner = rep.node();
        engine_.schedule(cfg_.inventory.tombstone_release_us, owner, "tombstone_release",
                         [this, owner, seat] {
                           rt(owner).replica->release_tombstone(seat, engine_.now());
                         });
      }
      return t;
    }
    case RequestKind::CONFIRMATION:
      return rep.confirm(id, seat, now);
    case RequestKind::AVAILABILITY_CHECK:
    default: {
      // Snapshot fetch: a read-only operation at the owner.
      BookingTicket t;
      t.request = id;
      t.seat = seat;
      t.outcome = BookingOutcome::CONFIRMED;
      t.decided_at = now;
      t.coordinator = rep.node();
      t.op = InventoryOp::CONFIRM;
      return t;
    }
  }
}

void ScenarioRun::attempt_strong(NodeRt& n, RecordId id) {
  auto& st = collector_.at(id);
  ++pending_[id].tries;
  const NodeId owner = owner_node(st.flight);
  const NodeId serving = n.id;

  if (owner == serving) {
    engine_.schedule(cfg_.inventory.coordinator_service_us, owner, "strong_op", [this, id, owner] {
      const BookingTicket t = apply_strong_op(*rt(owner).replica, id, engine_.now());
      on_ticket(id, t);
    });
    return;
  }

  net_->deliver(serving, owner, cfg_.inventory.rpc_bytes, "strong_rpc", [this, id, owner,
                                                                         serving] {
    if (rt(owner).down) return;  // silent; the caller times out and retries
    engine_.schedule(
        cfg_.inventory.coordinator_service_us, owner, "strong_op", [this, id, owner, serving] {
          auto& ow = rt(owner);
          const BookingTicket t = apply_strong_op(*ow.replica, id, engine_.now());
          FlightSnapshot snap;
          if (collector_.at(id).kind == RequestKind::AVAILABILITY_CHECK) {
            if (auto s = ow.replica->snapshot(collector_.at(id).flight)) snap = std::move(*s);
          }
          net_->deliver(owner, serving, cfg_.inventory.rpc_bytes, "strong_reply",
                        [this, id, t, serving, snap = std::move(snap)] {
                          auto it = pending_.find(id);
                          if (it == pending_.end() || it->second.done) return;
                          auto& stt = collector_.at(id);
                          if (stt.kind == RequestKind::AVAILABILITY_CHECK) {
                            rt(serving).cache->put(stt.flight, CachedFlight{snap, engine_.now()},
                                                   engine_.now());
                            collector_.record_read_staleness(0);
                          }
                          on_ticket(id, t);
                        });
        });
  });

  engine_.schedule(cfg_.inventory.retry_timeout_us, serving, "strong_timeout",
                   [this, id, serving] {
                     auto it = pending_.find(id);
                     if (it == pending_.end() || it->second.done) return;
                     if (it->second.tries >= cfg_.inventory.retry_limit) {
                       auto& stt = collector_.at(id);
                       BookingTicket t;
                       t.request = id;
                       t.seat = SeatId{stt.flight, stt.seat};
                       t.outcome = BookingOutcome::TIMEOUT;
                       t.decided_at = engine_.now();
                       t.coordinator = owner_node(stt.flight);
                       t.op = stt.kind == RequestKind::AVAILABILITY_CHECK ? InventoryOp::CONFIRM
                                                                          : InventoryOp::BOOK;
                       engine_.annotate(serving, "strong_timeout_final");
                       on_ticket(id, t);
                       return;
                     }
                     attempt_strong(rt(serving), id);
                   });
}

void ScenarioRun::on_ticket(RecordId id, const BookingTicket& t) {
  auto& st = collector_.at(id);
  if (st.kind != RequestKind::AVAILABILITY_CHECK) {
    st.outcome = t.outcome;
    collector_.record_ticket(t);
  } else if (t.outcome == BookingOutcome::TIMEOUT) {
    st.outcome = BookingOutcome::TIMEOUT;
  }
  pending_.erase(id);
  proceed_to_terminal(id);
}

void ScenarioRun::proceed_to_terminal(RecordId id) {
  auto& st = collector_.at(id);
  auto& node = rt(st.serving_node);
  const StageKind terminal = decide(st.kind, opts_.decision_policy) == Verdict::LOCAL
                                 ? StageKind::TEMP_STORAGE
                                 : StageKind::CLOUD_SYNC;
  stage_enter(id, terminal);
  node.stages[static_cast<int>(terminal)]->offer(StageJob{{id}, st.bytes});
}

void ScenarioRun::respond(NodeRt& n, RecordId id) {
  auto& st = collector_.at(id);
  st.server_done = engine_.now();
  net_->deliver(n.id, st.origin_region, profile_.response_bytes, "response", [this, id] {
    auto& s = collector_.at(id);
    s.completed = engine_.now();
    s.fate = RecordFate::COMPLETED;
  });
}

// ---- archive batching to the cloud store ----

void ScenarioRun::flush_archive(NodeRt& n) {
  if (!n.archive_buffer.empty() && !n.archive_inflight) {
    if (n.id == cloud_node_) {
      // The archive store is local: append directly.
      collector_.count_archived(n.archive_buffer.size());
      for (RecordId r : n.archive_buffer) {
        collector_.record_archive_lag(
            engine_.now() - collector_.at(r).hop_exit[static_cast<int>(StageKind::CLOUD_SYNC)]);
      }
      n.archive_buffer.clear();
      n.archive_bytes = 0;
    } else {
      n.archive_inflight = true;
      send_archive_batch(n, ++n.archive_seq, 1);
    }
  }
  engine_.schedule(cfg_.pipeline.archive.interval_us, n.id, "archive_tick",
                   [this, id = n.id] { flush_archive(rt(id)); });
}

void ScenarioRun::send_archive_batch(NodeRt& n, std::uint64_t seq, int attempt) {
  const NodeId src = n.id;
  // One message per batch regardless of batch size.
  const std::int64_t bytes = n.archive_bytes + cfg_.pipeline.archive.batch_header_bytes;
  std::vector<RecordId> batch = n.archive_buffer;  // resend-safe copy

  net_->deliver(src, cloud_node_, bytes, "archive_batch", [this, src, seq, batch] {
    if (archive_seen_.emplace(std::make_pair(src, seq), true).second) {
      collector_.count_archived(batch.size());
      for (RecordId r : batch) {
        collector_.record_archive_lag(
            engine_.now() - collector_.at(r).hop_exit[static_cast<int>(StageKind::CLOUD_SYNC)]);
      }
    }
    net_->deliver(cloud_node_, src, 64, "archive_ack", [this, src, seq] {
      auto& node = rt(src);
      if (node.archive_inflight && node.archive_seq == seq) {
        node.archive_buffer.clear();
        node.archive_bytes = 0;
        node.archive_inflight = false;
      }
    });
  });

  // The ack check allows a full round trip on the slowest link before the
  // retry fires; duplicate deliveries are deduped by (node, seq).
  const std::int64_t check_after =
      cfg_.pipeline.archive.backoff_us + 2 * topo_.max_link_latency_us() + msec(10);
  engine_.schedule(check_after, src, "archive_retry_check", [this, src, seq, attempt] {
    auto& node = rt(src);
    if (!node.archive_inflight || node.archive_seq != seq) return;  // acked
    if (attempt >= cfg_.pipeline.archive.retry_limit) {
      collector_.count_unsynced();
      engine_.annotate(src, "archive_unsynced");
      node.archive_buffer.clear();
      node.archive_bytes = 0;
      node.archive_inflight = false;
      return;
    }
    send_archive_batch(node, seq, attempt + 1);
  });
}

// ---- inventory anti-entropy sync ----

void ScenarioRun::sync_tick(NodeRt& n) {
  const SimTime send_time = engine_.now();
  for (NodeId peer : compute_nodes_) {
    if (peer == n.id) continue;
    std::size_t end = 0;
    std::vector<LogEntry> delta = n.replica->own_entries_since(n.acked_offset[peer], &end);
    const std::int64_t bytes =
        cfg_.inventory.sync_header_bytes +
        static_cast<std::int64_t>(delta.size()) * cfg_.inventory.sync_entry_bytes;
    const NodeId src = n.id;
    net_->deliver(
        src, peer, bytes, "inv_sync",
        [this, src, peer, send_time, end, delta = std::move(delta)] {
          auto& dst = rt(peer);
          if (dst.down) return;
          dst.replica->apply_remote(delta);
          // Refresh cached foreign snapshots touched by this delta.
          for (const auto& e : delta) {
            if (CachedFlight* c = dst.cache->peek(e.seat.flight)) {
              if (e.seat.seat < c->snap.seats.size()) {
                c->snap.seats[e.seat.seat].status = e.version.status;
                c->as_of = std::max(c->as_of, send_time);
              }
            }
          }
          auto& fresh = dst.freshness[src];
          fresh = std::max(fresh, send_time);
          net_->deliver(peer, src, 64, "inv_sync_ack", [this, src, peer, end] {
            auto& off = rt(src).acked_offset[peer];
            off = std::max(off, end);
          });
        });
  }
  engine_.schedule(cfg_.inventory.sync_interval_us, n.id, "inv_sync_tick",
                   [this, id = n.id] { sync_tick(rt(id)); });
}

// ---- autoscaling ----

void ScenarioRun::autoscale_tick(NodeRt& n, StageKind st) {
  auto& stage = *n.stages[static_cast<int>(st)];
  const auto w = stage.take_window(engine_.now());
  // Normalize the window's offered load against the instance count the
  // decision applies to, so desired = ceil(avg_busy / target) regardless of
  // mid-window scaling.
  const double u = stage.instances() > 0 ? w.avg_busy / stage.instances() : w.utilization;
  if (auto desired = n.scalers[static_cast<int>(st)]->evaluate(stage.instances(), u)) {
    engine_.schedule(cfg_.orchestration.autoscaler.actuation_delay_us, n.id, "scale_apply",
                     [this, id = n.id, st, to = *desired] {
                       auto& sg = *rt(id).stages[static_cast<int>(st)];
                       const int prev = sg.instances();
                       if (prev == to) return;
                       sg.set_instances(to);
                       collector_.record_scale(ScaleEvent{
                           engine_.now(), std::string(topo_.node(id).name), st, prev, to});
                     });
  }
  engine_.schedule(cfg_.orchestration.autoscaler.evaluation_period_us, n.id, "autoscale_tick",
                   [this, id = n.id, st] { autoscale_tick(rt(id), st); });
}

void ScenarioRun::schedule_timers() {
  for (auto& n : nodes_) {
    engine_.schedule(cfg_.pipeline.archive.interval_us, n->id, "archive_tick",
                     [this, id = n->id] { flush_archive(rt(id)); });
    if (compute_nodes_.size() > 1) {
      engine_.schedule(cfg_.inventory.sync_interval_us, n->id, "inv_sync_tick",
                       [this, id = n->id] { sync_tick(rt(id)); });
    }
    if (cfg_.orchestration.autoscaler.enabled) {
      for (int s = 0; s < kStageKinds; ++s) {
        engine_.schedule(cfg_.orchestration.autoscaler.evaluation_period_us, n->id,
                         "autoscale_tick",
                         [this, id = n->id, s] { autoscale_tick(rt(id), static_cast<StageKind>(s)); });
      }
    }
  }
  if (cfg_.orchestration.routing.kind == RoutingPolicyKind::PREDICTIVE) {
    const std::int64_t period = cfg_.orchestration.routing.forecast_period_us;
    auto loop = std::make_shared<std::function<void()>>();
    *loop = [this, period, loop] {
      for (auto& n : nodes_) {
        router_->observe_period_load(n->id, static_cast<double>(n->arrivals_this_period));
        n->arrivals_this_period = 0;
      }
      engine_.schedule(period, kSimNode, "forecast_tick", *loop);
    };
    engine_.schedule(period, kSimNode, "forecast_tick", *loop);
  }
  for (const auto& f : cfg_.failures) {
    auto node = topo_.find(f.node);
    if (!node || !by_id_.count(*node)) continue;
    engine_.schedule(static_cast<std::int64_t>(f.down_us), *node, "node_down",
                     [this, id = *node] {
                       rt(id).down = true;
                       router_->set_healthy(id, false);
                     });
    engine_.schedule(static_cast<std::int64_t>(f.up_us), *node, "node_up", [this, id = *node] {
      rt(id).down = false;
      router_->set_healthy(id, true);
    });
  }
}

ScenarioReport ScenarioRun::build_report() {
  ScenarioReport rep;
  rep.scenario = cfg_.name;
  rep.architecture =
      std::string(to_string(arch_ == Architecture::CENTRALIZED ? Architecture::CENTRALIZED
                                                               : Architecture::EDGE));
  rep.seed = cfg_.seed;
  rep.config_hash = cfg_.config_hash;
  rep.workload_fingerprint = cfg_.workload_fingerprint();
  rep.horizon_us = cfg_.horizon_us();

  std::vector<std::uint64_t> lat_all;
  std::vector<std::uint64_t> resp_all;
  std::map<std::string, std::vector<std::uint64_t>> lat_kind;
  std::uint64_t within_slo = 0;

  for (const auto& r : collector_.requests()) {
    ++rep.generated;
    switch (r.fate) {
      case RecordFate::COMPLETED: {
        ++rep.completed;
        const std::uint64_t lat = r.server_done - r.created;
        const std::uint64_t e2e = r.completed - r.created;
        lat_all.push_back(lat);
        resp_all.push_back(e2e);
        lat_kind[std::string(to_string(r.kind))].push_back(lat);
        if (e2e <= cfg_.metrics.slo_us) ++within_slo;
        break;
      }
      case RecordFate::SHED: ++rep.shed; break;
      case RecordFate::FILTERED: ++rep.filtered; break;
      case RecordFate::FAILED: ++rep.failed; break;
      case RecordFate::IN_FLIGHT: ++rep.in_flight; break;
    }
  }
  rep.latency_overall = summarize_us(std::move(lat_all));
  rep.response_overall = summarize_us(std::move(resp_all));
  for (auto& [k, v] : lat_kind) rep.latency_by_kind[k] = summarize_us(std::move(v));

  rep.throughput_per_s = static_cast<double>(rep.completed) / to_s(rep.horizon_us);
  rep.satisfaction = satisfaction_score(rep.generated, rep.completed, within_slo, cfg_.metrics);
  rep.satisfaction_slo_hit_fraction =
      rep.completed ? static_cast<double>(within_slo) / static_cast<double>(rep.completed) : 0;
  rep.satisfaction_completion_fraction =
      rep.generated ? static_cast<double>(rep.completed) / static_cast<double>(rep.generated) : 0;

  for (const auto& t : collector_.tickets()) {
    if (t.op != InventoryOp::BOOK) continue;
    switch (t.outcome) {
      case BookingOutcome::CONFIRMED: ++rep.bookings_confirmed; break;
      case BookingOutcome::REJECTED_TAKEN: ++rep.bookings_rejected; break;
      case BookingOutcome::TIMEOUT: ++rep.bookings_timeout; break;
      default: break;
    }
  }

  for (const auto& n : nodes_) {
    rep.cache_hits += n->cache->hits();
    rep.cache_misses += n->cache->misses();
    if (!n->is_cloud) {
      rep.cache_by_node[std::string(topo_.node(n->id).name)] = {n->cache->hits(),
                                                                n->cache->misses()};
    }
  }
  rep.max_read_staleness_ms = to_ms(collector_.max_read_staleness_us());
  double max_service = 0;
  for (const auto& st : cfg_.pipeline.stages)
    max_service = std::max(max_service, st.service.mean_us());
  rep.read_staleness_bound_ms =
      to_ms(static_cast<SimTime>(cfg_.inventory.sync_interval_us + topo_.max_link_latency_us() +
                                 static_cast<std::int64_t>(max_service) +
                                 cfg_.inventory.coordinator_service_us));

  rep.messages_sent = net_->stats().sent;
  rep.messages_dropped = net_->stats().dropped;
  rep.unsynced_batches = collector_.unsynced_batches();
  rep.archived_records = collector_.archived();

  for (const auto& n : nodes_) {
    for (const auto& st : n->stages) rep.resource_seconds += st->instance_seconds(engine_.now());
  }
  for (const auto& [node, count] : router_->routed_counts()) {
    rep.routed_by_node[std::string(topo_.node(node).name)] = count;
  }
  rep.scale_events = collector_.scale_events();
  return rep;
}

RunOutput ScenarioRun::execute() {
  if (opts_.trace) {
    trace_.enable([this](NodeId id) -> std::string_view {
      return id < topo_.node_count() ? std::string_view(topo_.node(id).name) : "sim";
    });
  }
  build_topology();
  build_flights();
  build_nodes();
  build_router();

  profile_ = cfg_.workload.profile;
  profile_.region_weights.clear();
  for (const auto& r : cfg_.topology.regions) {
    auto it = cfg_.workload.region_weights.find(r.name);
    profile_.region_weights.push_back(it == cfg_.workload.region_weights.end() ? 0.0 : it->second);
  }
  if (profile_.region_weights.empty()) profile_.region_weights.push_back(1.0);

  gen_ = std::make_unique<WorkloadGenerator>(profile_, rng_workload_);
  schedule_timers();
  schedule_next_arrival();

  engine_.run_until(cfg_.horizon_us());

  RunOutput out;
  out.report = build_report();
  out.trace_text = trace_.text();

  AuditInputs ai;
  ai.collector = &collector_;
  ai.report = &out.report;
  for (const auto& n : nodes_) ai.replicas.push_back(n->replica.get());
  out.audit_violations = audit_run(ai);

  // Quiescent consistency: once writes stop, loss-free sync must converge all
  // replicas within one interval plus transit. Only decidable when the run
  // actually went quiescent long enough before the horizon.
  if (nodes_.size() > 1 && out.report.in_flight == 0 && net_->stats().dropped == 0) {
    SimTime last_write = 0;
    for (const auto& n : nodes_) {
      for (const auto& e : n->replica->log()) last_write = std::max(last_write, e.at);
    }
    // A write shipped at the next sync tick arrives within one interval plus
    // one transit; the margin covers serialization and apply slack.
    const SimTime margin = static_cast<SimTime>(cfg_.inventory.sync_interval_us +
                                                topo_.max_link_latency_us()) +
                           msec(25);
    if (last_write + margin <= cfg_.horizon_us()) {
      std::vector<const Replica*> reps;
      for (const auto& n : nodes_) reps.push_back(n->replica.get());
      auto disagreements = check_replicas_converged(reps);
      out.audit_violations.insert(out.audit_violations.end(), disagreements.begin(),
                                  disagreements.end());
      out.convergence_checked = true;
    }
  }
  return out;
}

}  // namespace

RunOutput run_scenario(const ScenarioConfig& cfg, Architecture arch, RunOptions opts) {
  if (arch == Architecture::BOTH) {
    throw std::invalid_argument("run_scenario executes one architecture at a time");
  }
  ScenarioRun run(cfg, arch, opts);
  return run.execute();
}

}  // namespace edgesim
