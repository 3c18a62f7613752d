#include "edgesim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace edgesim {

using nlohmann::json;

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::EDGE: return "edge";
    case Architecture::CENTRALIZED: return "centralized";
    case Architecture::BOTH: return "both";
  }
  return "?";
}

std::optional<Architecture> architecture_from(std::string_view s) {
  if (s == "edge") return Architecture::EDGE;
  if (s == "centralized") return Architecture::CENTRALIZED;
  if (s == "both") return Architecture::BOTH;
  return std::nullopt;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PipelineConfig::PipelineConfig() {
  // Ordering reflects the chain's implied complexity; every value is a
  // scenario input.
  stages[0] = StageParams{{ServiceSpec::Kind::FIXED, 200, 0}, 1, 1024};   // ingestion
  stages[1] = StageParams{{ServiceSpec::Kind::FIXED, 100, 0}, 1, 1024};   // filtering
  stages[2] = StageParams{{ServiceSpec::Kind::FIXED, 500, 0}, 1, 1024};   // aggregation
  stages[3] = StageParams{{ServiceSpec::Kind::FIXED, 2000, 0}, 1, 1024};  // analysis
  stages[4] = StageParams{{ServiceSpec::Kind::FIXED, 300, 0}, 1, 1024};   // temp storage
  stages[5] = StageParams{{ServiceSpec::Kind::FIXED, 500, 0}, 1, 1024};   // cloud sync
}

std::string ScenarioConfig::workload_fingerprint() const {
  std::ostringstream os;
  const auto& p = workload.profile;
  os << seed << '|' << p.base_rate_per_s << '|' << p.duration_us << '|' << p.locality << '|'
     << p.irrelevant_rate << '|' << p.request_bytes << '|' << p.response_bytes << '|';
  for (double m : p.mix) os << m << ',';
  os << '|';
  for (const auto& [r, w] : workload.region_weights) os << r << '=' << w << ',';
  os << '|';
  for (const auto& pk : p.peaks) os << pk.start_us << '-' << pk.end_us << 'x' << pk.multiplier << ',';
  return hash_hex(fnv1a64(os.str()));
}

namespace {

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

struct Parser {
  std::vector<Diagnostic>& diags;

  void fail(const std::string& path, const std::string& msg) {
    diags.push_back(Diagnostic{path, msg});
  }

  std::int64_t duration_us_from_ms(const json& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "expected a number of milliseconds");
      return 0;
    }
    const double ms = j.get<double>();
    return static_cast<std::int64_t>(std::llround(ms * 1000.0));
  }

  LatencySpec latency(const json& j, const std::string& path) {
    LatencySpec out;
    if (j.is_number()) {
      out.kind = LatencySpec::Kind::FIXED;
      out.lo_us = duration_us_from_ms(j, path);
    } else if (j.is_array() && j.size() == 2) {
      out.kind = LatencySpec::Kind::UNIFORM;
      out.lo_us = duration_us_from_ms(j[0], path);
      out.hi_us = duration_us_from_ms(j[1], path);
    } else {
      fail(path, "latency_ms must be a number or [lo, hi]");
    }
    return out;
  }

  ServiceSpec service(const json& j, const std::string& path) {
    ServiceSpec out;
    if (j.is_number()) {
      out.kind = ServiceSpec::Kind::FIXED;
      out.a_us = j.get<std::int64_t>();
    } else if (j.is_object() && j.contains("exponential_mean_us")) {
      out.kind = ServiceSpec::Kind::EXPONENTIAL;
      out.a_us = j["exponential_mean_us"].get<std::int64_t>();
    } else if (j.is_object() && j.contains("uniform_us") && j["uniform_us"].is_array() &&
               j["uniform_us"].size() == 2) {
      out.kind = ServiceSpec::Kind::UNIFORM;
      out.a_us = j["uniform_us"][0].get<std::int64_t>();
      out.b_us = j["uniform_us"][1].get<std::int64_t>();
    } else {
      fail(path, "service_us must be a number, {exponential_mean_us}, or {uniform_us:[lo,hi]}");
    }
    return out;
  }

  Coord coord(const json& j, const std::string& path) {
    Coord c;
    if (j.is_array() && j.size() == 2) {
      c.x = j[0].get<double>();
      c.y = j[1].get<double>();
    } else {
      fail(path, "coord must be [x, y]");
    }
    return c;
  }
};

}  // namespace

LoadResult load_scenario(const std::string& text, const std::string& origin) {
  LoadResult res;
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    res.diagnostics.push_back(Diagnostic{
        origin, "parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                    e.what()});
    return res;
  }

  ScenarioConfig cfg;
  Parser p{res.diagnostics};
  try {
    cfg.name = root.value("name", cfg.name);
    cfg.seed = root.value("seed", cfg.seed);
    if (root.contains("architecture")) {
      auto a = architecture_from(root["architecture"].get<std::string>());
      if (!a)
        p.fail("architecture", "must be one of edge|centralized|both");
      else
        cfg.architecture = *a;
    }
    if (root.contains("drain_ms"))
      cfg.drain_us = static_cast<SimTime>(p.duration_us_from_ms(root["drain_ms"], "drain_ms"));

    // --- topology ---
    if (root.contains("topology")) {
      const auto& t = root["topology"];
      cfg.topology.edge_favorable = t.value("edge_favorable", false);
      if (t.contains("link_classes")) {
        for (const auto& [name, jc] : t["link_classes"].items()) {
          const std::string path = "topology.link_classes." + name;
          LinkClass cls;
          const std::string kind = jc.value("kind", "lan");
          cls.kind = kind == "wan"        ? LinkClass::Kind::WAN
                     : kind == "cellular" ? LinkClass::Kind::CELLULAR
                                          : LinkClass::Kind::LAN;
          if (jc.contains("latency_ms")) cls.base_latency = p.latency(jc["latency_ms"], path);
          if (jc.contains("bandwidth_mbps"))
            cls.bandwidth_bps =
                static_cast<std::int64_t>(jc["bandwidth_mbps"].get<double>() * 1e6);
          cls.loss_rate = jc.value("loss_rate", 0.0);
          cfg.topology.link_classes[name] = cls;
        }
      }
      for (const auto& jr : t.value("regions", json::array())) {
        cfg.topology.regions.push_back(
            NamedCoord{jr.value("name", ""), p.coord(jr.value("coord", json::array({0, 0})),
                                                     "topology.regions.coord")});
      }
      for (const auto& je : t.value("edges", json::array())) {
        cfg.topology.edges.push_back(EdgeNodeConfig{
            je.value("name", ""), je.value("region", ""),
            p.coord(je.value("coord", json::array({0, 0})), "topology.edges.coord")});
      }
      if (t.contains("cloud")) {
        cfg.topology.cloud.name = t["cloud"].value("name", "cloud");
        cfg.topology.cloud.coord =
            p.coord(t["cloud"].value("coord", json::array({0, 0})), "topology.cloud.coord");
      }
      for (const auto& jl : t.value("links", json::array())) {
        LinkConfig lc;
        if (jl.contains("between") && jl["between"].is_array() && jl["between"].size() == 2) {
          lc.a = jl["between"][0].get<std::string>();
          lc.b = jl["between"][1].get<std::string>();
        } else {
          p.fail("topology.links", "link needs between:[a,b]");
        }
        lc.link_class = jl.value("class", "");
        cfg.topology.links.push_back(lc);
      }
    }

    // --- pipeline ---
    if (root.contains("pipeline")) {
      const auto& pl = root["pipeline"];
      static constexpr const char* kStageNames[kStageKinds] = {
          "ingestion", "filtering", "aggregation", "analysis", "temp_storage", "cloud_sync"};
      for (int i = 0; i < kStageKinds; ++i) {
        if (!pl.contains(kStageNames[i])) continue;
        const auto& js = pl[kStageNames[i]];
        const std::string path = std::string("pipeline.") + kStageNames[i];
        auto& st = cfg.pipeline.stages[i];
        if (js.contains("service_us")) st.service = p.service(js["service_us"], path);
        st.instances = js.value("instances", st.instances);
        st.queue_capacity = js.value("queue_capacity", st.queue_capacity);
      }
      if (pl.contains("aggregation_window")) {
        cfg.pipeline.window.count = pl["aggregation_window"].value("count", 8);
        if (pl["aggregation_window"].contains("timeout_ms"))
          cfg.pipeline.window.timeout_us = p.duration_us_from_ms(
              pl["aggregation_window"]["timeout_ms"], "pipeline.aggregation_window.timeout_ms");
      }
      cfg.pipeline.compression_factor =
          pl.value("compression_factor", cfg.pipeline.compression_factor);
      if (pl.contains("archive")) {
        const auto& ja = pl["archive"];
        if (ja.contains("interval_ms"))
          cfg.pipeline.archive.interval_us =
              p.duration_us_from_ms(ja["interval_ms"], "pipeline.archive.interval_ms");
        cfg.pipeline.archive.retry_limit = ja.value("retry_limit", 3);
        if (ja.contains("backoff_ms"))
          cfg.pipeline.archive.backoff_us =
              p.duration_us_from_ms(ja["backoff_ms"], "pipeline.archive.backoff_ms");
      }
    }

    // --- inventory ---
    if (root.contains("inventory")) {
      const auto& inv = root["inventory"];
      for (const auto& jp : inv.value("partitions", json::array())) {
        PartitionConfig pc;
        pc.owner = jp.value("owner", "");
        for (const auto& jf : jp.value("flights", json::array())) {
          pc.flights.push_back(FlightConfig{jf.value("id", ""), jf.value("seats", 0u),
                                            jf.value("price", 0.0)});
        }
        cfg.inventory.partitions.push_back(std::move(pc));
      }
      if (inv.contains("sync_interval_ms"))
        cfg.inventory.sync_interval_us =
            p.duration_us_from_ms(inv["sync_interval_ms"], "inventory.sync_interval_ms");
      if (inv.contains("hold_ttl_ms"))
        cfg.inventory.hold_ttl_us =
            p.duration_us_from_ms(inv["hold_ttl_ms"], "inventory.hold_ttl_ms");
      if (inv.contains("tombstone_release_ms"))
        cfg.inventory.tombstone_release_us = p.duration_us_from_ms(
            inv["tombstone_release_ms"], "inventory.tombstone_release_ms");
      cfg.inventory.coordinator_service_us =
          inv.value("coordinator_service_us", cfg.inventory.coordinator_service_us);
      cfg.inventory.retry_limit = inv.value("retry_limit", cfg.inventory.retry_limit);
      if (inv.contains("retry_timeout_ms"))
        cfg.inventory.retry_timeout_us =
            p.duration_us_from_ms(inv["retry_timeout_ms"], "inventory.retry_timeout_ms");
      cfg.inventory.rpc_bytes = inv.value("rpc_bytes", cfg.inventory.rpc_bytes);
      cfg.inventory.sync_entry_bytes =
          inv.value("sync_entry_bytes", cfg.inventory.sync_entry_bytes);
    }

    // --- orchestration ---
    if (root.contains("orchestration")) {
      const auto& o = root["orchestration"];
      if (o.contains("routing")) {
        const auto& r = o["routing"];
        const std::string pol = r.value("policy", "nearest");
        if (pol == "nearest")
          cfg.orchestration.routing.kind = RoutingPolicyKind::NEAREST;
        else if (pol == "least_loaded")
          cfg.orchestration.routing.kind = RoutingPolicyKind::LEAST_LOADED;
        else if (pol == "predictive")
          cfg.orchestration.routing.kind = RoutingPolicyKind::PREDICTIVE;
        else
          p.fail("orchestration.routing.policy", "must be nearest|least_loaded|predictive");
        if (r.contains("ewma_half_life_ms"))
          cfg.orchestration.routing.ewma_half_life_us = p.duration_us_from_ms(
              r["ewma_half_life_ms"], "orchestration.routing.ewma_half_life_ms");
        cfg.orchestration.routing.forecast_windows =
            r.value("forecast_windows", cfg.orchestration.routing.forecast_windows);
        if (r.contains("forecast_period_ms"))
          cfg.orchestration.routing.forecast_period_us = p.duration_us_from_ms(
              r["forecast_period_ms"], "orchestration.routing.forecast_period_ms");
      }
      if (o.contains("autoscaler")) {
        const auto& a = o["autoscaler"];
        auto& ac = cfg.orchestration.autoscaler;
        ac.enabled = a.value("enabled", false);
        ac.target_utilization = a.value("target_utilization", ac.target_utilization);
        ac.min_instances = a.value("min_instances", ac.min_instances);
        ac.max_instances = a.value("max_instances", ac.max_instances);
        if (a.contains("evaluation_period_ms"))
          ac.evaluation_period_us = p.duration_us_from_ms(
              a["evaluation_period_ms"], "orchestration.autoscaler.evaluation_period_ms");
        if (a.contains("actuation_delay_ms"))
          ac.actuation_delay_us = p.duration_us_from_ms(
              a["actuation_delay_ms"], "orchestration.autoscaler.actuation_delay_ms");
        const std::string f = a.value("forecaster", "none");
        if (f == "none")
          ac.forecaster = false;
        else if (f == "moving_average")
          ac.forecaster = true;
        else
          p.fail("orchestration.autoscaler.forecaster", "must be none|moving_average");
        ac.forecast_windows = a.value("forecast_windows", ac.forecast_windows);
      }
      if (o.contains("cache")) {
        cfg.orchestration.cache.capacity =
            o["cache"].value("capacity", cfg.orchestration.cache.capacity);
        if (o["cache"].contains("ttl_ms"))
          cfg.orchestration.cache.ttl_us =
              p.duration_us_from_ms(o["cache"]["ttl_ms"], "orchestration.cache.ttl_ms");
      }
    }

    // --- workload ---
    if (root.contains("workload")) {
      const auto& w = root["workload"];
      auto& wp = cfg.workload.profile;
      wp.base_rate_per_s = w.value("base_rate_per_s", wp.base_rate_per_s);
      if (w.contains("duration_ms"))
        wp.duration_us = static_cast<SimTime>(
            p.duration_us_from_ms(w["duration_ms"], "workload.duration_ms"));
      if (w.contains("mix")) {
        wp.mix = {0, 0, 0, 0};
        static constexpr const char* kKindNames[kRequestKinds] = {
            "availability_check", "booking", "confirmation", "cancellation"};
        for (int k = 0; k < kRequestKinds; ++k)
          wp.mix[k] = w["mix"].value(kKindNames[k], 0.0);
      }
      if (w.contains("region_weights")) {
        for (const auto& [name, jv] : w["region_weights"].items())
          cfg.workload.region_weights[name] = jv.get<double>();
      }
      for (const auto& jp : w.value("peaks", json::array())) {
        PeakInterval pi;
        pi.start_us = static_cast<SimTime>(
            p.duration_us_from_ms(jp.value("start_ms", json(0)), "workload.peaks.start_ms"));
        pi.end_us = static_cast<SimTime>(
            p.duration_us_from_ms(jp.value("end_ms", json(0)), "workload.peaks.end_ms"));
        pi.multiplier = jp.value("multiplier", 1.0);
        wp.peaks.push_back(pi);
      }
      wp.locality = w.value("locality", wp.locality);
      wp.irrelevant_rate = w.value("irrelevant_rate", wp.irrelevant_rate);
      wp.request_bytes = w.value("request_bytes", wp.request_bytes);
      wp.response_bytes = w.value("response_bytes", wp.response_bytes);
    }

    // --- metrics ---
    if (root.contains("metrics")) {
      const auto& m = root["metrics"];
      if (m.contains("slo_ms"))
        cfg.metrics.slo_us =
            static_cast<SimTime>(p.duration_us_from_ms(m["slo_ms"], "metrics.slo_ms"));
      if (m.contains("satisfaction_weights")) {
        cfg.metrics.weight_slo = m["satisfaction_weights"].value("slo", cfg.metrics.weight_slo);
        cfg.metrics.weight_completion =
            m["satisfaction_weights"].value("completion", cfg.metrics.weight_completion);
      }
    }

    // --- failures ---
    for (const auto& jf : root.value("failures", json::array())) {
      FailureWindow fw;
      fw.node = jf.value("node", "");
      fw.down_us = static_cast<SimTime>(
          p.duration_us_from_ms(jf.value("down_ms", json(0)), "failures.down_ms"));
      fw.up_us = static_cast<SimTime>(
          p.duration_us_from_ms(jf.value("up_ms", json(0)), "failures.up_ms"));
      cfg.failures.push_back(fw);
    }
  } catch (const json::exception& e) {
    res.diagnostics.push_back(Diagnostic{origin, std::string("malformed value: ") + e.what()});
    return res;
  }

  cfg.config_hash = hash_hex(fnv1a64(text));

  auto vdiags = validate(cfg);
  res.diagnostics.insert(res.diagnostics.end(), vdiags.begin(), vdiags.end());
  if (res.diagnostics.empty()) res.config = std::move(cfg);
  return res;
}

LoadResult load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    LoadResult res;
    res.diagnostics.push_back(Diagnostic{path, "cannot open file"});
    return res;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str(), path);
}

std::vector<Diagnostic> validate(const ScenarioConfig& cfg) {
  std::vector<Diagnostic> out;
  auto fail = [&](const std::string& path, const std::string& msg) {
    out.push_back(Diagnostic{path, msg});
  };

  const auto& topo = cfg.topology;
  std::set<std::string> node_names;
  std::set<std::string> region_names;
  std::set<std::string> edge_names;
  for (const auto& r : topo.regions) {
    if (r.name.empty()) fail("topology.regions", "region without a name");
    if (!node_names.insert(r.name).second) fail("topology.regions", "duplicate name " + r.name);
    region_names.insert(r.name);
  }
  for (const auto& e : topo.edges) {
    if (!node_names.insert(e.name).second) fail("topology.edges", "duplicate name " + e.name);
    edge_names.insert(e.name);
    if (!region_names.count(e.region))
      fail("topology.edges", e.name + " placed in unknown region " + e.region);
  }
  if (!node_names.insert(topo.cloud.name).second)
    fail("topology.cloud", "duplicate name " + topo.cloud.name);
  if (topo.regions.empty()) fail("topology.regions", "at least one region required");

  for (const auto& [name, cls] : topo.link_classes) {
    const std::string path = "topology.link_classes." + name;
    if (cls.bandwidth_bps <= 0) fail(path, "bandwidth must be > 0");
    if (cls.loss_rate < 0 || cls.loss_rate >= 1) fail(path, "loss_rate must be in [0, 1)");
    if (cls.base_latency.lo_us < 0) fail(path, "latency must be >= 0");
    if (cls.base_latency.kind == LatencySpec::Kind::UNIFORM &&
        cls.base_latency.hi_us < cls.base_latency.lo_us)
      fail(path, "latency range must have lo <= hi");
  }

  // Symmetric link map keyed by unordered pair; duplicates collapse.
  std::map<std::pair<std::string, std::string>, const LinkClass*> links;
  for (const auto& l : topo.links) {
    const std::string path = "topology.links";
    if (!node_names.count(l.a)) fail(path, "unknown endpoint " + l.a);
    if (!node_names.count(l.b)) fail(path, "unknown endpoint " + l.b);
    if (l.a == l.b) fail(path, "self link at " + l.a);
    auto cls = topo.link_classes.find(l.link_class);
    if (cls == topo.link_classes.end()) {
      fail(path, "unknown link class " + l.link_class);
      continue;
    }
    auto key = std::minmax(l.a, l.b);
    links[{key.first, key.second}] = &cls->second;
  }
  auto linked = [&](const std::string& a, const std::string& b) -> const LinkClass* {
    auto key = std::minmax(a, b);
    auto it = links.find({key.first, key.second});
    return it == links.end() ? nullptr : it->second;
  };

  const bool wants_edge = cfg.architecture != Architecture::CENTRALIZED;
  const bool wants_central = cfg.architecture != Architecture::EDGE;

  for (const auto& r : topo.regions) {
    bool has_edge_link = false;
    bool edge_reaches_cloud = false;
    for (const auto& e : topo.edges) {
      if (!linked(r.name, e.name)) continue;
      has_edge_link = true;
      if (linked(e.name, topo.cloud.name)) edge_reaches_cloud = true;
    }
    const bool has_cloud_link = linked(r.name, topo.cloud.name) != nullptr;
    if (wants_edge && !has_edge_link)
      fail("topology.links", "region " + r.name + " has no reachable edge node");
    if (wants_central && !has_cloud_link)
      fail("topology.links",
           "region " + r.name + " has no cloud link (required by the centralized baseline)");
    if (!has_cloud_link && !edge_reaches_cloud)
      fail("topology.links", "region " + r.name + " has no path to the cloud");
  }
  if (wants_edge) {
    for (const auto& e : topo.edges) {
      if (!linked(e.name, topo.cloud.name))
        fail("topology.links", "edge " + e.name + " has no cloud link");
    }
    if (topo.edges.size() > 1) {
      for (std::size_t i = 0; i < topo.edges.size(); ++i)
        for (std::size_t j = i + 1; j < topo.edges.size(); ++j)
          if (!linked(topo.edges[i].name, topo.edges[j].name))
            fail("topology.links", "edges " + topo.edges[i].name + " and " +
                                       topo.edges[j].name +
                                       " are not linked (replica sync needs a path)");
    }
  }

  // Edge-favorable scenarios must actually be edge favorable: the best edge
  // path beats the cloud path for every region.
  if (topo.edge_favorable) {
    for (const auto& r : topo.regions) {
      const LinkClass* cloud_link = linked(r.name, topo.cloud.name);
      if (!cloud_link) continue;
      double best_edge = -1;
      for (const auto& e : topo.edges) {
        if (const LinkClass* el = linked(r.name, e.name)) {
          const double m = el->base_latency.mean_us();
          if (best_edge < 0 || m < best_edge) best_edge = m;
        }
      }
      if (best_edge >= 0 && best_edge >= cloud_link->base_latency.mean_us())
        fail("topology.edge_favorable",
             "region " + r.name + ": min edge latency is not below the cloud latency");
    }
  }

  // --- pipeline ---
  for (int i = 0; i < kStageKinds; ++i) {
    const auto& st = cfg.pipeline.stages[i];
    const std::string path =
        std::string("pipeline.") + std::string(to_string(static_cast<StageKind>(i)));
    if (st.instances < 1) fail(path, "instances must be >= 1");
    if (st.queue_capacity < 0) fail(path, "queue_capacity must be >= 0");
    if (st.service.a_us < 0 || (st.service.kind == ServiceSpec::Kind::UNIFORM &&
                                st.service.b_us < st.service.a_us))
      fail(path, "invalid service time");
  }
  if (cfg.pipeline.window.count < 1)
    fail("pipeline.aggregation_window.count", "must be >= 1");
  if (cfg.pipeline.window.timeout_us < 0)
    fail("pipeline.aggregation_window.timeout_ms", "must be >= 0");
  if (cfg.pipeline.compression_factor <= 0 || cfg.pipeline.compression_factor > 1.0)
    fail("pipeline.compression_factor", "must be in (0, 1]");
  if (cfg.pipeline.archive.interval_us <= 0)
    fail("pipeline.archive.interval_ms", "must be > 0");

  // --- inventory ---
  std::set<std::string> flight_ids;
  for (const auto& part : cfg.inventory.partitions) {
    if (!edge_names.count(part.owner))
      fail("inventory.partitions", "owner " + part.owner + " is not an edge node");
    for (const auto& f : part.flights) {
      if (f.seats == 0) fail("inventory.partitions", "flight " + f.id + " has zero seats");
      if (!flight_ids.insert(f.id).second)
        fail("inventory.partitions", "duplicate flight " + f.id);
    }
  }
  if (cfg.inventory.sync_interval_us <= 0) fail("inventory.sync_interval_ms", "must be > 0");
  if (cfg.inventory.hold_ttl_us < 0) fail("inventory.hold_ttl_ms", "must be >= 0");
  if (cfg.inventory.retry_timeout_us <= 0) fail("inventory.retry_timeout_ms", "must be > 0");

  // --- orchestration ---
  const auto& ac = cfg.orchestration.autoscaler;
  if (ac.min_instances > ac.max_instances)
    fail("orchestration.autoscaler", "min_instances > max_instances");
  if (ac.min_instances < 1) fail("orchestration.autoscaler.min_instances", "must be >= 1");
  if (ac.target_utilization <= 0 || ac.target_utilization >= 1)
    fail("orchestration.autoscaler.target_utilization", "must be in (0, 1)");
  if (ac.evaluation_period_us <= 0)
    fail("orchestration.autoscaler.evaluation_period_ms", "must be > 0");
  if (cfg.orchestration.cache.capacity < 1) fail("orchestration.cache.capacity", "must be >= 1");
  if (cfg.orchestration.cache.ttl_us <= 0) fail("orchestration.cache.ttl_ms", "must be > 0");

  // --- workload ---
  const auto& wp = cfg.workload.profile;
  {
    double s = 0;
    for (double m : wp.mix) {
      s += m;
      if (m < 0) fail("workload.mix", "negative probability");
    }
    if (std::abs(s - 1.0) > 1e-9)
      fail("workload.mix", "probabilities sum to " + std::to_string(s) + ", expected 1");
  }
  {
    double s = 0;
    for (const auto& [name, w] : cfg.workload.region_weights) {
      s += w;
      if (w < 0) fail("workload.region_weights", "negative weight for " + name);
      if (!region_names.count(name))
        fail("workload.region_weights", "unknown region " + name);
    }
    if (std::abs(s - 1.0) > 1e-9)
      fail("workload.region_weights",
           "weights sum to " + std::to_string(s) + ", expected 1");
  }
  if (wp.base_rate_per_s <= 0) fail("workload.base_rate_per_s", "must be > 0");
  if (wp.duration_us == 0) fail("workload.duration_ms", "must be > 0");
  if (wp.locality < 0 || wp.locality > 1) fail("workload.locality", "must be in [0, 1]");
  if (wp.irrelevant_rate < 0 || wp.irrelevant_rate >= 1)
    fail("workload.irrelevant_rate", "must be in [0, 1)");
  for (std::size_t i = 0; i < wp.peaks.size(); ++i) {
    const auto& pk = wp.peaks[i];
    if (pk.multiplier < 1.0) fail("workload.peaks", "multiplier must be >= 1");
    if (pk.end_us <= pk.start_us) fail("workload.peaks", "empty interval");
    for (std::size_t j = i + 1; j < wp.peaks.size(); ++j) {
      const auto& o = wp.peaks[j];
      if (pk.start_us < o.end_us && o.start_us < pk.end_us)
        fail("workload.peaks", "overlapping peak intervals");
    }
  }
  if (wp.request_bytes <= 0) fail("workload.request_bytes", "must be > 0");
  if (wp.response_bytes <= 0) fail("workload.response_bytes", "must be > 0");

  // --- metrics ---
  if (cfg.metrics.slo_us == 0) fail("metrics.slo_ms", "must be > 0");
  if (std::abs(cfg.metrics.weight_slo + cfg.metrics.weight_completion - 1.0) > 1e-9)
    fail("metrics.satisfaction_weights", "weights must sum to 1");

  // --- failures ---
  for (const auto& f : cfg.failures) {
    if (!node_names.count(f.node)) fail("failures", "unknown node " + f.node);
    if (f.up_us <= f.down_us) fail("failures", "up_ms must be after down_ms");
  }

  return out;
}

}  // namespace edgesim
