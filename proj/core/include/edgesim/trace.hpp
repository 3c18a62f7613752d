#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "edgesim/sim_time.hpp"

namespace edgesim {

// Node identifier inside one scenario run. Index into the run's node table.
using NodeId = std::uint32_t;
constexpr NodeId kSimNode = 0xffffffffu;

// Newline-delimited trace records: time,seq,target,action
// Collecting is off unless enabled; the buffer is written out by the caller.
class TraceSink {
 public:
  using NameResolver = std::function<std::string_view(NodeId)>;

  void enable(NameResolver resolver) {
    enabled_ = true;
    resolver_ = std::move(resolver);
  }
  bool enabled() const { return enabled_; }

  void line(SimTime t, std::uint64_t seq, NodeId target, std::string_view action);

  const std::string& text() const { return buffer_; }

 private:
  bool enabled_ = false;
  NameResolver resolver_;
  std::string buffer_;
};

}  // namespace edgesim
