#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgesim/engine.hpp"
#include "edgesim/rng.hpp"
#include "edgesim/sim_time.hpp"

namespace edgesim {

enum class NodeKind : std::uint8_t { REGION, EDGE, CLOUD };

struct Coord {
  double x = 0;
  double y = 0;
};

double euclidean(const Coord& a, const Coord& b);

// Propagation delay spec: fixed value or uniform range, in microseconds.
struct LatencySpec {
  enum class Kind : std::uint8_t { FIXED, UNIFORM } kind = Kind::FIXED;
  std::int64_t lo_us = 0;
  std::int64_t hi_us = 0;

  // Fixed specs consume no draw, so adding loss-free fixed links to a
  // scenario does not shift the network stream.
  std::int64_t sample_us(RngStream& rng) const;
  double mean_us() const;
  std::int64_t max_us() const { return kind == Kind::FIXED ? lo_us : hi_us; }
};

struct LinkClass {
  enum class Kind : std::uint8_t { LAN, WAN, CELLULAR } kind = Kind::LAN;
  LatencySpec base_latency;
  std::int64_t bandwidth_bps = 0;  // bytes per second, > 0
  double loss_rate = 0.0;          // in [0, 1)
};

struct NodeInfo {
  std::string name;
  NodeKind kind = NodeKind::REGION;
  Coord coord;
  // For EDGE nodes: the region they are placed in.
  std::optional<NodeId> region;
};

// Parametric topology: user regions, edge nodes, one cloud node, and a
// symmetric link map keyed by unordered endpoint pair.
class Topology {
 public:
  NodeId add_node(NodeInfo info);
  void add_link(NodeId a, NodeId b, LinkClass cls);

  const NodeInfo& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::optional<NodeId> find(const std::string& name) const;

  bool has_link(NodeId a, NodeId b) const;
  const LinkClass& link(NodeId a, NodeId b) const;  // throws if absent

  std::vector<NodeId> regions() const;
  std::vector<NodeId> edges() const;
  NodeId cloud() const;  // throws if no cloud node was added

  std::int64_t max_link_latency_us() const;

 private:
  static std::uint64_t key(NodeId a, NodeId b);
  std::vector<NodeInfo> nodes_;
  std::map<std::uint64_t, LinkClass> links_;
};

// Propagation sample plus serialization delay; serialization rounds up to a
// whole microsecond. No queueing inside links.
std::int64_t transit_delay_us(const LinkClass& link, std::int64_t size_bytes, RngStream& rng);

struct NetworkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

// Message delivery over the topology. With probability (1 - loss_rate) the
// arrival callback is scheduled at now + transit delay; otherwise the message
// is recorded as dropped and the callback never runs.
class Network {
 public:
  Network(const Topology& topo, Engine& engine, RngStream& rng)
      : topo_(topo), engine_(engine), rng_(rng) {}

  // Returns true if the message was scheduled for arrival, false if dropped.
  bool deliver(NodeId src, NodeId dst, std::int64_t size_bytes, const char* action,
               std::function<void()> on_arrive);

  const NetworkStats& stats() const { return stats_; }

  // Test hook: force-drop everything addressed to `node` while set.
  void force_drop_to(NodeId node, bool on);

 private:
  const Topology& topo_;
  Engine& engine_;
  RngStream& rng_;
  NetworkStats stats_;
  std::optional<NodeId> force_drop_dst_;
};

}  // namespace edgesim
