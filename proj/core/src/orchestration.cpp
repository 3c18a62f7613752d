#include "edgesim/orchestration.hpp"

#include <cmath>
#include <limits>

namespace edgesim {

Router::Router(const Topology& topo, RoutingParams params, std::vector<NodeId> candidates,
               BacklogFn backlog)
    : topo_(topo), params_(params), candidates_(std::move(candidates)), backlog_(std::move(backlog)) {
  for (NodeId n : candidates_) {
    healthy_[n] = true;
    forecasts_.emplace(n, MovingAverage(params_.forecast_windows));
  }
}

void Router::set_healthy(NodeId node, bool up) { healthy_[node] = up; }

bool Router::healthy(NodeId node) const {
  auto it = healthy_.find(node);
  return it != healthy_.end() && it->second;
}

double Router::ewma_load(NodeId node, SimTime now) {
  auto& e = ewma_[node];
  const double current = backlog_ ? backlog_(node) : 0.0;
  if (e.at == 0 && e.value == 0) {
    e.value = current;
  } else {
    const double dt = static_cast<double>(now - e.at);
    const double alpha =
        1.0 - std::exp2(-dt / static_cast<double>(params_.ewma_half_life_us));
    e.value += alpha * (current - e.value);
  }
  e.at = now;
  return e.value;
}

void Router::observe_period_load(NodeId node, double count) {
  auto it = forecasts_.find(node);
  if (it != forecasts_.end()) it->second.observe(count);
}

std::optional<NodeId> Router::route(NodeId region, SimTime now) {
  std::optional<NodeId> best;
  double best_score = std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();

  for (NodeId n : candidates_) {
    if (!healthy_[n]) continue;
    double score = 0;
    switch (params_.kind) {
      case RoutingPolicyKind::NEAREST:
        if (!topo_.has_link(region, n)) continue;
        score = topo_.link(region, n).base_latency.mean_us();
        break;
      case RoutingPolicyKind::LEAST_LOADED:
        if (!topo_.has_link(region, n)) continue;
        score = ewma_load(n, now);
        break;
      case RoutingPolicyKind::PREDICTIVE:
        if (!topo_.has_link(region, n)) continue;
        score = forecasts_.at(n).forecast(ewma_load(n, now));
        break;
    }
    const double dist = euclidean(topo_.node(region).coord, topo_.node(n).coord);
    // Tie-break: Euclidean distance, then node id (candidates are in id order).
    if (score < best_score || (score == best_score && dist < best_dist)) {
      best = n;
      best_score = score;
      best_dist = dist;
    }
  }
  if (best) ++routed_[*best];
  return best;
}

int autoscale_desired(int current, double observed_utilization, const AutoscalerConfig& cfg) {
  const double raw = static_cast<double>(current) * observed_utilization /
                     cfg.target_utilization;
  // Guard against ceil(x + ulp) overshooting an exact integer ratio.
  int desired = static_cast<int>(std::ceil(raw - 1e-9));
  if (desired < cfg.min_instances) desired = cfg.min_instances;
  if (desired > cfg.max_instances) desired = cfg.max_instances;
  return desired;
}

std::optional<int> Autoscaler::evaluate(int current, double window_utilization) {
  double observed = window_utilization;
  if (cfg_.forecaster) {
    forecast_.observe(window_utilization);
    observed = forecast_.forecast(window_utilization);
  }
  const int desired = autoscale_desired(current, observed, cfg_);
  if (desired == current) return std::nullopt;
  return desired;
}

}  // namespace edgesim
