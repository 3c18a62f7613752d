#pragma once

#include <stdexcept>
#include <string>

#include "edgesim/config.hpp"

namespace edgesim::test {

// Small two-region scenario used across the unit suites. Kept as JSON so the
// config path is exercised the same way the CLI exercises it.
inline std::string small_scenario_json() {
  return R"({
  "name": "small",
  "seed": 11,
  "architecture": "both",
  "drain_ms": 2000,
  "topology": {
    "edge_favorable": true,
    "link_classes": {
      "lan": {"kind": "lan", "latency_ms": 2, "bandwidth_mbps": 1000, "loss_rate": 0},
      "wan": {"kind": "wan", "latency_ms": 40, "bandwidth_mbps": 100, "loss_rate": 0}
    },
    "regions": [
      {"name": "north", "coord": [0, 100]},
      {"name": "south", "coord": [0, -100]}
    ],
    "edges": [
      {"name": "edge-north", "region": "north", "coord": [2, 98]},
      {"name": "edge-south", "region": "south", "coord": [2, -98]}
    ],
    "cloud": {"name": "cloud", "coord": [500, 0]},
    "links": [
      {"between": ["north", "edge-north"], "class": "lan"},
      {"between": ["south", "edge-south"], "class": "lan"},
      {"between": ["north", "edge-south"], "class": "wan"},
      {"between": ["south", "edge-north"], "class": "wan"},
      {"between": ["north", "cloud"], "class": "wan"},
      {"between": ["south", "cloud"], "class": "wan"},
      {"between": ["edge-north", "cloud"], "class": "wan"},
      {"between": ["edge-south", "cloud"], "class": "wan"},
      {"between": ["edge-north", "edge-south"], "class": "wan"}
    ]
  },
  "pipeline": {
    "ingestion": {"service_us": 200, "instances": 2, "queue_capacity": 512},
    "filtering": {"service_us": 100, "instances": 1, "queue_capacity": 512},
    "aggregation": {"service_us": 300, "instances": 1, "queue_capacity": 512},
    "analysis": {"service_us": 1000, "instances": 2, "queue_capacity": 512},
    "temp_storage": {"service_us": 300, "instances": 1, "queue_capacity": 512},
    "cloud_sync": {"service_us": 300, "instances": 1, "queue_capacity": 512},
    "aggregation_window": {"count": 4, "timeout_ms": 10},
    "compression_factor": 1.0,
    "archive": {"interval_ms": 100, "retry_limit": 3, "backoff_ms": 50}
  },
  "inventory": {
    "partitions": [
      {"owner": "edge-north", "flights": [{"id": "NF-1", "seats": 20, "price": 100}]},
      {"owner": "edge-south", "flights": [{"id": "SF-1", "seats": 20, "price": 100}]}
    ],
    "sync_interval_ms": 100,
    "hold_ttl_ms": 5000,
    "coordinator_service_us": 300,
    "retry_limit": 3,
    "retry_timeout_ms": 400
  },
  "orchestration": {
    "routing": {"policy": "nearest"},
    "autoscaler": {"enabled": false},
    "cache": {"capacity": 64, "ttl_ms": 2000}
  },
  "workload": {
    "base_rate_per_s": 200,
    "duration_ms": 5000,
    "mix": {"availability_check": 0.6, "booking": 0.25, "confirmation": 0.1, "cancellation": 0.05},
    "region_weights": {"north": 0.5, "south": 0.5},
    "locality": 0.8
  },
  "metrics": {"slo_ms": 500}
})";
}

inline ScenarioConfig load_or_die(const std::string& json) {
  auto res = load_scenario(json, "test");
  if (!res.ok()) {
    std::string msg = "test scenario failed to load:";
    for (const auto& d : res.diagnostics) msg += "\n  " + d.path + ": " + d.message;
    throw std::runtime_error(msg);
  }
  return *res.config;
}

inline ScenarioConfig small_scenario() { return load_or_die(small_scenario_json()); }

}  // namespace edgesim::test
