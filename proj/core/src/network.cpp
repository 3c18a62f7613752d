#include "edgesim/network.hpp"

#include <cmath>
#include <stdexcept>

namespace edgesim {

double euclidean(const Coord& a, const Coord& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

std::int64_t LatencySpec::sample_us(RngStream& rng) const {
  if (kind == Kind::FIXED) return lo_us;
  return static_cast<std::int64_t>(rng.uniform(static_cast<double>(lo_us),
                                               static_cast<double>(hi_us)));
}

double LatencySpec::mean_us() const {
  if (kind == Kind::FIXED) return static_cast<double>(lo_us);
  return 0.5 * (static_cast<double>(lo_us) + static_cast<double>(hi_us));
}

NodeId Topology::add_node(NodeInfo info) {
  nodes_.push_back(std::move(info));
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::uint64_t Topology::key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void Topology::add_link(NodeId a, NodeId b, LinkClass cls) {
  links_[key(a, b)] = cls;
}

std::optional<NodeId> Topology::find(const std::string& name) const {
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

bool Topology::has_link(NodeId a, NodeId b) const {
  return links_.count(key(a, b)) != 0;
}

const LinkClass& Topology::link(NodeId a, NodeId b) const {
  auto it = links_.find(key(a, b));
  if (it == links_.end()) {
    throw std::logic_error("no link between " + nodes_[a].name + " and " + nodes_[b].name);
  }
  return it->second;
}

std::vector<NodeId> Topology::regions() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::REGION) out.push_back(i);
  return out;
}

std::vector<NodeId> Topology::edges() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::EDGE) out.push_back(i);
  return out;
}

NodeId Topology::cloud() const {
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].kind == NodeKind::CLOUD) return i;
  throw std::logic_error("topology has no cloud node");
}

std::int64_t Topology::max_link_latency_us() const {
  std::int64_t m = 0;
  for (const auto& [k, cls] : links_) m = std::max(m, cls.base_latency.max_us());
  return m;
}

std::int64_t transit_delay_us(const LinkClass& link, std::int64_t size_bytes, RngStream& rng) {
  const std::int64_t prop = link.base_latency.sample_us(rng);
  // ceil(size * 1e6 / bandwidth)
  const std::int64_t ser =
      (size_bytes * 1000000 + link.bandwidth_bps - 1) / link.bandwidth_bps;
  return prop + ser;
}

bool Network::deliver(NodeId src, NodeId dst, std::int64_t size_bytes, const char* action,
                      std::function<void()> on_arrive) {
  const LinkClass& link = topo_.link(src, dst);
  ++stats_.sent;
  const bool forced = force_drop_dst_ && *force_drop_dst_ == dst;
  if (forced || rng_.bernoulli(link.loss_rate)) {
    ++stats_.dropped;
    engine_.annotate(dst, std::string("drop from=") + topo_.node(src).name);
    return false;
  }
  const std::int64_t d = transit_delay_us(link, size_bytes, rng_);
  ++stats_.delivered;
  engine_.schedule(d, dst, action, std::move(on_arrive));
  return true;
}

void Network::force_drop_to(NodeId node, bool on) {
  if (on)
    force_drop_dst_ = node;
  else
    force_drop_dst_.reset();
}

}  // namespace edgesim
