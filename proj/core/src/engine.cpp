#include "edgesim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <stdexcept>

namespace edgesim {

void TraceSink::line(SimTime t, std::uint64_t seq, NodeId target, std::string_view action) {
  if (!enabled_) return;
  char head[64];
  auto* p = head;
  p = std::to_chars(p, head + 20, t).ptr;
  *p++ = ',';
  p = std::to_chars(p, p + 20, seq).ptr;
  *p++ = ',';
  buffer_.append(head, p);
  if (target == kSimNode) {
    buffer_ += "sim";
  } else if (resolver_) {
    buffer_ += resolver_(target);
  } else {
    char nb[16];
    auto rn = std::to_chars(nb, nb + sizeof nb, target);
    buffer_.append(nb, rn.ptr);
  }
  buffer_ += ',';
  buffer_ += action;
  buffer_ += '\n';
}

std::uint64_t Engine::schedule(std::int64_t delay_us, NodeId target, const char* action,
                               std::function<void()> fn) {
  if (delay_us < 0) throw std::invalid_argument("schedule: negative delay");
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Ev{now_ + static_cast<SimTime>(delay_us), seq, target, action, std::move(fn)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return seq;
}

std::uint64_t Engine::run_until(SimTime horizon) {
  if (horizon < now_) throw std::invalid_argument("run_until: horizon before now");
  std::uint64_t count = 0;
  while (!heap_.empty() && heap_.front().at <= horizon) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Ev ev = std::move(heap_.back());
    heap_.pop_back();
    assert(ev.at >= now_);
    now_ = ev.at;
    cur_seq_ = ev.seq;
    if (trace_) trace_->line(now_, ev.seq, ev.target, ev.action);
    ev.fn();
    ++processed_;
    ++count;
  }
  now_ = horizon;
  return count;
}

void Engine::annotate(NodeId target, std::string_view action) {
  if (trace_) trace_->line(now_, cur_seq_, target, action);
}

}  // namespace edgesim
