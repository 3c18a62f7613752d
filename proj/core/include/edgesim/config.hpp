#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgesim/metrics.hpp"
#include "edgesim/network.hpp"
#include "edgesim/orchestration.hpp"
#include "edgesim/pipeline.hpp"
#include "edgesim/workload.hpp"

namespace edgesim {

enum class Architecture : std::uint8_t { EDGE, CENTRALIZED, BOTH };
std::string_view to_string(Architecture a);
std::optional<Architecture> architecture_from(std::string_view s);

struct NamedCoord {
  std::string name;
  Coord coord;
};

struct EdgeNodeConfig {
  std::string name;
  std::string region;
  Coord coord;
};

struct LinkConfig {
  std::string a;
  std::string b;
  std::string link_class;
};

struct TopologyConfig {
  bool edge_favorable = false;
  std::map<std::string, LinkClass> link_classes;
  std::vector<NamedCoord> regions;
  std::vector<EdgeNodeConfig> edges;
  NamedCoord cloud{"cloud", {}};
  std::vector<LinkConfig> links;
};

struct AggregationWindowConfig {
  int count = 8;
  std::int64_t timeout_us = msec(20);
};

struct ArchiveConfig {
  std::int64_t interval_us = msec(100);
  int retry_limit = 3;
  std::int64_t backoff_us = msec(50);
  std::int64_t batch_header_bytes = 128;
};

struct PipelineConfig {
  std::array<StageParams, kStageKinds> stages;
  AggregationWindowConfig window;
  double compression_factor = 1.0;
  ArchiveConfig archive;

  PipelineConfig();
};

struct FlightConfig {
  std::string id;
  std::uint32_t seats = 0;
  double price = 0;
};

struct PartitionConfig {
  std::string owner;  // edge node name; remapped to the cloud when centralized
  std::vector<FlightConfig> flights;
};

struct InventoryConfig {
  std::vector<PartitionConfig> partitions;
  std::int64_t sync_interval_us = msec(100);
  std::int64_t hold_ttl_us = sec(5);
  std::int64_t tombstone_release_us = sec(10);
  std::int64_t coordinator_service_us = 300;
  int retry_limit = 3;
  std::int64_t retry_timeout_us = msec(500);
  std::int64_t rpc_bytes = 256;
  std::int64_t sync_entry_bytes = 64;
  std::int64_t sync_header_bytes = 128;
};

struct CacheConfig {
  std::size_t capacity = 1024;
  std::int64_t ttl_us = sec(2);
};

struct OrchestrationConfig {
  RoutingParams routing;
  AutoscalerConfig autoscaler;
  CacheConfig cache;
};

struct FailureWindow {
  std::string node;
  SimTime down_us = 0;
  SimTime up_us = 0;
};

struct WorkloadConfig {
  WorkloadProfile profile;
  std::map<std::string, double> region_weights;  // by region name
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  Architecture architecture = Architecture::BOTH;
  SimTime drain_us = sec(5);
  TopologyConfig topology;
  PipelineConfig pipeline;
  InventoryConfig inventory;
  OrchestrationConfig orchestration;
  WorkloadConfig workload;
  MetricsParams metrics;
  std::vector<FailureWindow> failures;

  std::string config_hash;  // fnv1a64 of the file bytes, hex

  SimTime horizon_us() const { return workload.profile.duration_us + drain_us; }
  // Seed + workload identity; guards compare() against mismatched experiments.
  std::string workload_fingerprint() const;
};

struct Diagnostic {
  std::string path;  // config path of the offending value, e.g. workload.mix
  std::string message;
};

struct LoadResult {
  std::optional<ScenarioConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

// Parses and validates. Parse failures are reported with a line number;
// validation failures name the offending path. A config is only returned
// when every invariant holds.
LoadResult load_scenario(const std::string& json_text, const std::string& origin = "config");
LoadResult load_scenario_file(const std::string& path);

std::vector<Diagnostic> validate(const ScenarioConfig& cfg);

std::string hash_hex(std::uint64_t h);

}  // namespace edgesim
