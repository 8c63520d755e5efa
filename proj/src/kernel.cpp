#include "emanet/kernel.hpp"

#include <fmt/format.h>

#include <ostream>
#include <stdexcept>

namespace emanet {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PacketDelivery: return "packet-delivery";
    case EventKind::Timer: return "timer";
    case EventKind::MobilityTick: return "mobility-tick";
    case EventKind::TrafficSend: return "traffic-send";
    case EventKind::SimEnd: return "sim-end";
  }
  return "?";
}

EventHandle Simulator::schedule(double at, EventKind kind, NodeId node, Action action,
                                std::string detail) {
  if (!(at >= now_)) {
    throw std::logic_error(fmt::format("event scheduled in the past: at={} now={}", at, now_));
  }
  const std::uint64_t seq = next_sequence_++;
  queue_.push(Entry{at, seq, kind, node, std::move(action), std::move(detail)});
  live_.insert(seq);
  return EventHandle{seq};
}

bool Simulator::cancel(EventHandle handle) {
  if (!handle.valid()) return false;
  if (live_.erase(handle.sequence) == 0) return false;
  cancelled_.insert(handle.sequence);
  ++cancelled_count_;
  return true;
}

std::size_t Simulator::run_until(double t_end) {
  std::size_t count = 0;
  while (!queue_.empty() && queue_.top().time <= t_end) {
    // priority_queue::top is const; the entry is moved out before pop.
    Entry entry = std::move(const_cast<Entry&>(queue_.top()));
    queue_.pop();
    if (cancelled_.erase(entry.sequence) != 0) continue;
    live_.erase(entry.sequence);
    now_ = entry.time;
    ++dispatched_;
    ++count;
    if (trace_ != nullptr) {
      *trace_ << fmt::format("{:.9f}\t{}\t{}\t{}\n", entry.time, entry.node, to_string(entry.kind),
                             entry.detail);
    }
    entry.action();
  }
  if (t_end > now_) now_ = t_end;
  return count;
}

}  // namespace emanet
