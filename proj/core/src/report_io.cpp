#include "edgesim/report_io.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace edgesim {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit_stats(std::ostringstream& os, const std::string& prefix, const LatencyStats& s) {
  os << prefix << ".count: " << s.count << '\n';
  os << prefix << ".mean_ms: " << fmt(s.mean_ms) << '\n';
  os << prefix << ".p50_ms: " << fmt(s.p50_ms) << '\n';
  os << prefix << ".p95_ms: " << fmt(s.p95_ms) << '\n';
  os << prefix << ".p99_ms: " << fmt(s.p99_ms) << '\n';
  os << prefix << ".max_ms: " << fmt(s.max_ms) << '\n';
}

}  // namespace

std::string report_to_text(const ScenarioReport& rep) {
  std::ostringstream os;
  os << "scenario: " << rep.scenario << '\n';
  os << "architecture: " << rep.architecture << '\n';
  os << "seed: " << rep.seed << '\n';
  os << "config_hash: " << rep.config_hash << '\n';
  os << "workload_fingerprint: " << rep.workload_fingerprint << '\n';
  os << "horizon_us: " << rep.horizon_us << '\n';
  os << "generated: " << rep.generated << '\n';
  os << "completed: " << rep.completed << '\n';
  os << "shed: " << rep.shed << '\n';
  os << "filtered: " << rep.filtered << '\n';
  os << "failed: " << rep.failed << '\n';
  os << "in_flight: " << rep.in_flight << '\n';
  emit_stats(os, "latency.overall", rep.latency_overall);
  for (const auto& [kind, s] : rep.latency_by_kind) emit_stats(os, "latency." + kind, s);
  emit_stats(os, "response.overall", rep.response_overall);
  os << "throughput_per_s: " << fmt(rep.throughput_per_s) << '\n';
  if (rep.satisfaction) {
    os << "satisfaction: " << fmt(*rep.satisfaction) << '\n';
  } else {
    os << "satisfaction: absent\n";
  }
  os << "satisfaction.slo_hit_fraction: " << fmt(rep.satisfaction_slo_hit_fraction) << '\n';
  os << "satisfaction.completion_fraction: " << fmt(rep.satisfaction_completion_fraction) << '\n';
  os << "bookings.confirmed: " << rep.bookings_confirmed << '\n';
  os << "bookings.rejected: " << rep.bookings_rejected << '\n';
  os << "bookings.timeout: " << rep.bookings_timeout << '\n';
  os << "cache.hits: " << rep.cache_hits << '\n';
  os << "cache.misses: " << rep.cache_misses << '\n';
  for (const auto& [node, hm] : rep.cache_by_node) {
    os << "cache.node." << node << ": hits=" << hm.first << " misses=" << hm.second << '\n';
  }
  os << "reads.max_staleness_ms: " << fmt(rep.max_read_staleness_ms) << '\n';
  os << "reads.staleness_bound_ms: " << fmt(rep.read_staleness_bound_ms) << '\n';
  os << "messages.sent: " << rep.messages_sent << '\n';
  os << "messages.dropped: " << rep.messages_dropped << '\n';
  os << "archive.unsynced_batches: " << rep.unsynced_batches << '\n';
  os << "archive.records: " << rep.archived_records << '\n';
  os << "resource_seconds: " << fmt(rep.resource_seconds) << '\n';
  for (const auto& [node, count] : rep.routed_by_node) {
    os << "routing.node." << node << ": " << count << '\n';
  }
  for (const auto& ev : rep.scale_events) {
    os << "scale_event: at_us=" << ev.at << " node=" << ev.node
       << " stage=" << to_string(ev.stage) << " from=" << ev.from << " to=" << ev.to << '\n';
  }
  return os.str();
}

std::optional<ScenarioReport> report_from_text(const std::string& text, std::string* error) {
  ScenarioReport rep;
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    kv[line.substr(0, colon)] = line.substr(colon + 2);
  }
  auto need = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (error) *error = std::string("missing field ") + key;
      return std::nullopt;
    }
    return it->second;
  };
  auto s = need("scenario");
  if (!s) return std::nullopt;
  rep.scenario = *s;
  s = need("architecture");
  if (!s) return std::nullopt;
  rep.architecture = *s;
  s = need("seed");
  if (!s) return std::nullopt;
  rep.seed = std::stoull(*s);
  rep.config_hash = kv.count("config_hash") ? kv["config_hash"] : "";
  s = need("workload_fingerprint");
  if (!s) return std::nullopt;
  rep.workload_fingerprint = *s;
  if (kv.count("horizon_us")) rep.horizon_us = std::stoull(kv["horizon_us"]);
  if (kv.count("generated")) rep.generated = std::stoull(kv["generated"]);
  if (kv.count("completed")) rep.completed = std::stoull(kv["completed"]);
  if (kv.count("shed")) rep.shed = std::stoull(kv["shed"]);
  if (kv.count("filtered")) rep.filtered = std::stoull(kv["filtered"]);
  if (kv.count("failed")) rep.failed = std::stoull(kv["failed"]);
  if (kv.count("in_flight")) rep.in_flight = std::stoull(kv["in_flight"]);
  if (kv.count("latency.overall.mean_ms"))
    rep.latency_overall.mean_ms = std::stod(kv["latency.overall.mean_ms"]);
  if (kv.count("latency.overall.count"))
    rep.latency_overall.count = std::stoull(kv["latency.overall.count"]);
  if (kv.count("throughput_per_s")) rep.throughput_per_s = std::stod(kv["throughput_per_s"]);
  if (kv.count("satisfaction") && kv["satisfaction"] != "absent")
    rep.satisfaction = std::stod(kv["satisfaction"]);
  return rep;
}

std::string comparison_to_text(const ComparisonReport& cmp) {
  std::ostringstream os;
  os << "scenario: " << cmp.scenario << '\n';
  os << "seed: " << cmp.seed << '\n';
  os << "config_hash: " << cmp.config_hash << '\n';
  os << "baseline.latency_mean_ms: " << fmt(cmp.baseline_latency_ms) << '\n';
  os << "edge.latency_mean_ms: " << fmt(cmp.edge_latency_ms) << '\n';
  os << "baseline.throughput_per_s: " << fmt(cmp.baseline_throughput_per_s) << '\n';
  os << "edge.throughput_per_s: " << fmt(cmp.edge_throughput_per_s) << '\n';
  os << "latency_reduction_pct: " << fmt(cmp.latency_reduction_pct) << '\n';
  os << "throughput_gain_pct: " << fmt(cmp.throughput_gain_pct) << '\n';
  if (cmp.satisfaction_gain_pct) {
    os << "satisfaction_gain_pct: " << fmt(*cmp.satisfaction_gain_pct) << '\n';
  } else {
    os << "satisfaction_gain_pct: absent\n";
  }
  return os.str();
}

std::string reports_to_csv(const std::vector<ScenarioReport>& reports) {
  std::ostringstream os;
  os << "architecture,request_kind,metric,value\n";
  for (const auto& rep : reports) {
    auto row = [&](const std::string& kind, const std::string& metric, const std::string& v) {
      os << rep.architecture << ',' << kind << ',' << metric << ',' << v << '\n';
    };
    auto stats_rows = [&](const std::string& kind, const LatencyStats& s) {
      row(kind, "count", std::to_string(s.count));
      row(kind, "latency_mean_ms", fmt(s.mean_ms));
      row(kind, "latency_p50_ms", fmt(s.p50_ms));
      row(kind, "latency_p95_ms", fmt(s.p95_ms));
      row(kind, "latency_p99_ms", fmt(s.p99_ms));
      row(kind, "latency_max_ms", fmt(s.max_ms));
    };
    stats_rows("overall", rep.latency_overall);
    for (const auto& [kind, s] : rep.latency_by_kind) stats_rows(kind, s);
    row("overall", "response_mean_ms", fmt(rep.response_overall.mean_ms));
    row("overall", "throughput_per_s", fmt(rep.throughput_per_s));
    row("overall", "generated", std::to_string(rep.generated));
    row("overall", "completed", std::to_string(rep.completed));
    row("overall", "shed", std::to_string(rep.shed));
    row("overall", "failed", std::to_string(rep.failed));
    if (rep.satisfaction) row("overall", "satisfaction", fmt(*rep.satisfaction));
    row("overall", "resource_seconds", fmt(rep.resource_seconds));
  }
  return os.str();
}

}  // namespace edgesim
