#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

namespace emanet {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class EventKind : std::uint8_t { PacketDelivery, Timer, MobilityTick, TrafficSend, SimEnd };

const char* to_string(EventKind kind);

/// Opaque cancellation token; wraps the event's unique sequence number.
struct EventHandle {
  std::uint64_t sequence = 0;
  bool valid() const { return sequence != 0; }
};

/// Deterministic discrete-event engine.
///
/// Events fire in (time, sequence) order; the sequence is assigned at
/// scheduling time so equal-time events run FIFO.
class Simulator {
 public:
  using Action = std::function<void()>;

  double now() const { return now_; }

  /// Throws std::logic_error if `at` lies in the past.
  EventHandle schedule(double at, EventKind kind, NodeId node, Action action,
                       std::string detail = {});
  EventHandle schedule_in(double delay, EventKind kind, NodeId node, Action action,
                          std::string detail = {}) {
    return schedule(now_ + delay, kind, node, std::move(action), std::move(detail));
  }

  /// True iff the event had not yet fired (or been cancelled).
  bool cancel(EventHandle handle);

  /// Dispatches every event with fire time <= t_end, then sets now = t_end.
  std::size_t run_until(double t_end);

  /// Optional trace sink, one `time\tnode\tkind\tdetail` line per dispatch.
  void set_trace(std::ostream* out) { trace_ = out; }
  bool tracing() const { return trace_ != nullptr; }

  std::uint64_t scheduled() const { return next_sequence_ - 1; }
  std::uint64_t dispatched() const { return dispatched_; }
  std::uint64_t cancelled() const { return cancelled_count_; }
  std::size_t pending() const { return queue_.size() - cancelled_.size(); }

 private:
  struct Entry {
    double time;
    std::uint64_t sequence;
    EventKind kind;
    NodeId node;
    Action action;
    std::string detail;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  double now_ = 0.0;
  std::uint64_t next_sequence_ = 1;
  std::uint64_t dispatched_ = 0;
  std::uint64_t cancelled_count_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  // Sequences that are cancelled but still physically queued.
  std::unordered_set<std::uint64_t> cancelled_;
  // Sequences still queued (fired events are removed), for cancel() results.
  std::unordered_set<std::uint64_t> live_;
  std::ostream* trace_ = nullptr;
};

}  // namespace emanet
