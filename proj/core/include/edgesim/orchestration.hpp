#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "edgesim/network.hpp"
#include "edgesim/sim_time.hpp"

namespace edgesim {

enum class RoutingPolicyKind : std::uint8_t { NEAREST, LEAST_LOADED, PREDICTIVE };

// Arithmetic moving average over the last N observations; shared by the
// predictive router and the autoscaler's forecasting mode.
class MovingAverage {
 public:
  explicit MovingAverage(std::size_t window) : window_(window ? window : 1) {}

  void observe(double v) {
    history_.push_back(v);
    if (history_.size() > window_) history_.pop_front();
  }
  // Forecast for the next period; falls back to `if_empty` with no history.
  double forecast(double if_empty = 0.0) const {
    if (history_.empty()) return if_empty;
    double s = 0;
    for (double v : history_) s += v;
    return s / static_cast<double>(history_.size());
  }
  std::size_t size() const { return history_.size(); }

 private:
  std::size_t window_;
  std::deque<double> history_;
};

struct RoutingParams {
  RoutingPolicyKind kind = RoutingPolicyKind::NEAREST;
  std::int64_t ewma_half_life_us = 500000;
  std::size_t forecast_windows = 5;
  std::int64_t forecast_period_us = 1000000;
};

// Assigns each request to exactly one healthy edge node (or the cloud in the
// centralized architecture, where the candidate set is a single node).
class Router {
 public:
  using BacklogFn = std::function<double(NodeId)>;

  Router(const Topology& topo, RoutingParams params, std::vector<NodeId> candidates,
         BacklogFn backlog);

  // Returns the chosen node, or nullopt when no candidate is healthy.
  std::optional<NodeId> route(NodeId region, SimTime now);

  void set_healthy(NodeId node, bool up);
  bool healthy(NodeId node) const;

  // Called by the scenario driver once per forecast period per node with the
  // observed request count; feeds the predictive policy.
  void observe_period_load(NodeId node, double count);

  const std::map<NodeId, std::uint64_t>& routed_counts() const { return routed_; }

 private:
  double ewma_load(NodeId node, SimTime now);

  const Topology& topo_;
  RoutingParams params_;
  std::vector<NodeId> candidates_;
  BacklogFn backlog_;
  std::map<NodeId, bool> healthy_;
  struct Ewma {
    double value = 0;
    SimTime at = 0;
  };
  std::map<NodeId, Ewma> ewma_;
  std::map<NodeId, MovingAverage> forecasts_;
  std::map<NodeId, std::uint64_t> routed_;
};

// LRU cache with per-entry TTL. Entries older than ttl are never served;
// get refreshes recency, put inserts and evicts the least-recently-used
// entry at capacity.
template <typename K, typename V>
class LruTtlCache {
 public:
  LruTtlCache(std::size_t capacity, std::int64_t ttl_us)
      : capacity_(capacity ? capacity : 1), ttl_us_(ttl_us) {}

  struct Entry {
    V value;
    SimTime inserted_at = 0;
  };

  V* get(const K& key, SimTime now) {
    auto it = index_.find(key);
    if (it == index_.end()) {
      ++misses_;
      return nullptr;
    }
    if (now > it->second->inserted_at + static_cast<SimTime>(ttl_us_)) {
      ++misses_;
      return nullptr;  // expired entries are never served
    }
    order_.splice(order_.begin(), order_, it->second->lru_pos);
    ++hits_;
    return &it->second->value;
  }

  void put(const K& key, V value, SimTime now) {
    auto it = index_.find(key);
    if (it != index_.end()) {
      it->second->value = std::move(value);
      it->second->inserted_at = now;
      order_.splice(order_.begin(), order_, it->second->lru_pos);
      return;
    }
    if (index_.size() >= capacity_) {
      const K& victim = order_.back();
      index_.erase(victim);
      order_.pop_back();
      ++evictions_;
    }
    order_.push_front(key);
    auto node = std::make_unique<Slot>();
    node->value = std::move(value);
    node->inserted_at = now;
    node->lru_pos = order_.begin();
    index_.emplace(key, std::move(node));
  }

  // Lookup without touching recency, TTL, or hit counters; used by sync
  // refreshes, which update entries in place.
  V* peek(const K& key) {
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &it->second->value;
  }

  bool contains(const K& key) const { return index_.count(key) != 0; }
  std::size_t size() const { return index_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::uint64_t evictions() const { return evictions_; }

  // Deterministic iteration in key order, for sync-driven refreshes.
  template <typename Fn>
  void for_each(Fn&& fn) {
    for (auto& [k, slot] : index_) fn(k, slot->value, slot->inserted_at);
  }

 private:
  struct Slot {
    V value;
    SimTime inserted_at = 0;
    typename std::list<K>::iterator lru_pos;
  };
  std::size_t capacity_;
  std::int64_t ttl_us_;
  std::list<K> order_;  // front = most recent
  std::map<K, std::unique_ptr<Slot>> index_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::uint64_t evictions_ = 0;
};

struct AutoscalerConfig {
  bool enabled = false;
  double target_utilization = 0.6;  // in (0, 1)
  int min_instances = 1;
  int max_instances = 8;
  std::int64_t evaluation_period_us = 1000000;
  std::int64_t actuation_delay_us = 1000000;
  bool forecaster = false;
  std::size_t forecast_windows = 5;
};

// Utilization-proportional scaling: desired = ceil(current * observed /
// target), clamped to [min, max]. With forecasting on, `observed` is the
// moving-average forecast of recent window utilizations.
int autoscale_desired(int current, double observed_utilization, const AutoscalerConfig& cfg);

class Autoscaler {
 public:
  Autoscaler(const AutoscalerConfig& cfg)
      : cfg_(cfg), forecast_(cfg.forecast_windows) {}

  // Feed one evaluation window; returns the new desired count (to be applied
  // after the actuation delay) or nullopt when unchanged.
  std::optional<int> evaluate(int current, double window_utilization);

 private:
  AutoscalerConfig cfg_;
  MovingAverage forecast_;
};

}  // namespace edgesim
