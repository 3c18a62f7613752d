#include <doctest.h>

#include "edgesim/orchestration.hpp"

using namespace edgesim;

namespace {

Topology routed_topology() {
  Topology t;
  const NodeId region = t.add_node({"r", NodeKind::REGION, {0, 0}, {}});
  const NodeId a = t.add_node({"a", NodeKind::EDGE, {1, 0}, {region}});
  const NodeId b = t.add_node({"b", NodeKind::EDGE, {2, 0}, {region}});
  t.add_link(region, a, {LinkClass::Kind::LAN, {LatencySpec::Kind::FIXED, 5000, 0}, 1000000, 0});
  t.add_link(region, b, {LinkClass::Kind::LAN, {LatencySpec::Kind::FIXED, 20000, 0}, 1000000, 0});
  return t;
}

}  // namespace

TEST_CASE("single candidate wins under every policy") {
  Topology t;
  const NodeId region = t.add_node({"r", NodeKind::REGION, {0, 0}, {}});
  const NodeId only = t.add_node({"a", NodeKind::EDGE, {1, 0}, {region}});
  t.add_link(region, only, {LinkClass::Kind::LAN, {LatencySpec::Kind::FIXED, 5000, 0}, 1000000, 0});
  for (auto kind :
       {RoutingPolicyKind::NEAREST, RoutingPolicyKind::LEAST_LOADED, RoutingPolicyKind::PREDICTIVE}) {
    Router r(t, {kind, 500000, 5, 1000000}, {only}, [](NodeId) { return 1.0; });
    CHECK(r.route(region, 1) == only);
  }
}

TEST_CASE("nearest picks the lowest-latency edge") {
  auto t = routed_topology();
  Router r(t, {RoutingPolicyKind::NEAREST, 500000, 5, 1000000}, {1, 2}, nullptr);
  CHECK(r.route(0, 1) == NodeId{1});  // 5 ms beats 20 ms
}

TEST_CASE("least-loaded picks the shallower queue") {
  auto t = routed_topology();
  // Equal latencies; node 1 carries depth 10, node 2 depth 2.
  Router r(t, {RoutingPolicyKind::LEAST_LOADED, 500000, 5, 1000000}, {1, 2},
           [](NodeId n) { return n == 1 ? 10.0 : 2.0; });
  CHECK(r.route(0, 1) == NodeId{2});
}

TEST_CASE("predictive routes by the moving-average forecast") {
  auto t = routed_topology();
  Router r(t, {RoutingPolicyKind::PREDICTIVE, 500000, 3, 1000000}, {1, 2}, [](NodeId) { return 0.0; });
  // Node 1 trends at 100 req/period, node 2 at 10.
  for (int i = 0; i < 3; ++i) {
    r.observe_period_load(1, 100);
    r.observe_period_load(2, 10);
  }
  CHECK(r.route(0, 1) == NodeId{2});
}

TEST_CASE("unhealthy nodes are skipped; none healthy fails the request") {
  auto t = routed_topology();
  Router r(t, {RoutingPolicyKind::NEAREST, 500000, 5, 1000000}, {1, 2}, nullptr);
  r.set_healthy(1, false);
  CHECK(r.route(0, 1) == NodeId{2});
  r.set_healthy(2, false);
  CHECK_FALSE(r.route(0, 1).has_value());
}

TEST_CASE("routing is total over generated requests") {
  auto t = routed_topology();
  Router r(t, {RoutingPolicyKind::NEAREST, 500000, 5, 1000000}, {1, 2}, nullptr);
  for (int i = 0; i < 100; ++i) CHECK(r.route(0, static_cast<SimTime>(i)).has_value());
  std::uint64_t total = 0;
  for (const auto& [n, c] : r.routed_counts()) total += c;
  CHECK(total == 100);
}

TEST_CASE("cache returns fresh entries and expires by ttl") {
  LruTtlCache<int, int> c(8, 1000);
  c.put(1, 42, 100);
  SUBCASE("hit within ttl") {
    auto* v = c.get(1, 1100);  // exactly at ttl boundary: still fresh
    REQUIRE(v != nullptr);
    CHECK(*v == 42);
  }
  SUBCASE("miss one microsecond past ttl") { CHECK(c.get(1, 1101) == nullptr); }
}

TEST_CASE("lru eviction follows recency, gets refresh it") {
  LruTtlCache<char, int> c(2, 1000000);
  c.put('a', 1, 10);
  c.put('b', 2, 20);
  CHECK(c.get('a', 30) != nullptr);  // refresh a's recency
  c.put('c', 3, 40);                 // evicts b
  CHECK(c.get('b', 50) == nullptr);
  CHECK(c.get('a', 50) != nullptr);
  CHECK(c.get('c', 50) != nullptr);
  CHECK(c.size() == 2);
  CHECK(c.evictions() == 1);
}

TEST_CASE("cache occupancy never exceeds capacity") {
  LruTtlCache<int, int> c(4, 1000000);
  for (int i = 0; i < 100; ++i) {
    c.put(i, i, static_cast<SimTime>(i));
    CHECK(c.size() <= 4);
  }
}

TEST_CASE("autoscale formula: utilization-proportional with clamps") {
  AutoscalerConfig cfg;
  cfg.target_utilization = 0.6;
  cfg.min_instances = 1;
  cfg.max_instances = 8;
  SUBCASE("at target, the count is a fixed point") {
    CHECK(autoscale_desired(3, 0.6, cfg) == 3);
  }
  SUBCASE("2 instances at 90% with target 60% scale to 3") {
    CHECK(autoscale_desired(2, 0.9, cfg) == 3);
  }
  SUBCASE("idle clamps to the floor") { CHECK(autoscale_desired(4, 0.0, cfg) == 1); }
  SUBCASE("overload clamps to the ceiling") { CHECK(autoscale_desired(6, 1.0, cfg) == 8); }
}

TEST_CASE("forecasting autoscaler smooths over its window") {
  AutoscalerConfig cfg;
  cfg.enabled = true;
  cfg.target_utilization = 0.5;
  cfg.min_instances = 1;
  cfg.max_instances = 10;
  cfg.forecaster = true;
  cfg.forecast_windows = 4;
  Autoscaler as(cfg);
  // One utilization spike among idle windows: the average tempers the step.
  CHECK_FALSE(as.evaluate(2, 0.5).has_value());
  CHECK_FALSE(as.evaluate(2, 0.5).has_value());
  auto step = as.evaluate(2, 1.0);  // forecast = (0.5+0.5+1.0)/3 = 0.667
  REQUIRE(step.has_value());
  CHECK(*step == 3);  // ceil(2 * 0.667 / 0.5) = ceil(2.67)
}

TEST_CASE("moving average forecast matches the arithmetic mean") {
  MovingAverage ma(3);
  ma.observe(1);
  ma.observe(2);
  ma.observe(3);
  CHECK(ma.forecast() == doctest::Approx(2.0));
  ma.observe(5);  // window slides: mean of 2,3,5
  CHECK(ma.forecast() == doctest::Approx(10.0 / 3.0));
}
