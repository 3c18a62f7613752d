#include "edgesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgesim {

LatencyStats summarize_us(std::vector<std::uint64_t> samples) {
  LatencyStats out;
  out.count = samples.size();
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  out.mean_ms = sum / static_cast<double>(samples.size()) / 1000.0;
  auto rank = [&](double p) {
    const std::size_t n = samples.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (idx == 0) idx = 1;
    if (idx > n) idx = n;
    return static_cast<double>(samples[idx - 1]) / 1000.0;
  };
  out.p50_ms = rank(0.50);
  out.p95_ms = rank(0.95);
  out.p99_ms = rank(0.99);
  out.max_ms = static_cast<double>(samples.back()) / 1000.0;
  return out;
}

std::optional<double> satisfaction_score(std::uint64_t generated, std::uint64_t completed,
                                         std::uint64_t within_slo, const MetricsParams& params) {
  if (generated == 0) return std::nullopt;
  const double slo_fraction =
      completed == 0 ? 0.0
                     : static_cast<double>(within_slo) / static_cast<double>(completed);
  const double completion =
      static_cast<double>(completed) / static_cast<double>(generated);
  return params.weight_slo * slo_fraction + params.weight_completion * completion;
}

ComparisonReport compare_reports(const ScenarioReport& baseline, const ScenarioReport& edge) {
  if (baseline.seed != edge.seed ||
      baseline.workload_fingerprint != edge.workload_fingerprint) {
    throw std::invalid_argument(
        "compare: reports come from different seeds or workload profiles");
  }
  ComparisonReport out;
  out.scenario = edge.scenario;
  out.seed = edge.seed;
  out.config_hash = edge.config_hash;
  out.baseline_latency_ms = baseline.latency_overall.mean_ms;
  out.edge_latency_ms = edge.latency_overall.mean_ms;
  out.baseline_throughput_per_s = baseline.throughput_per_s;
  out.edge_throughput_per_s = edge.throughput_per_s;
  if (baseline.latency_overall.mean_ms > 0) {
    out.latency_reduction_pct = 100.0 *
        (baseline.latency_overall.mean_ms - edge.latency_overall.mean_ms) /
        baseline.latency_overall.mean_ms;
  }
  if (baseline.throughput_per_s > 0) {
    out.throughput_gain_pct =
        100.0 * (edge.throughput_per_s - baseline.throughput_per_s) / baseline.throughput_per_s;
  }
  if (baseline.satisfaction && edge.satisfaction && *baseline.satisfaction > 0) {
    out.satisfaction_gain_pct =
        100.0 * (*edge.satisfaction - *baseline.satisfaction) / *baseline.satisfaction;
  }
  return out;
}

}  // namespace edgesim
