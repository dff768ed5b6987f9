#pragma once

// Passive model of a distributed computation: processes, events, messages,
// checkpoints and checkpoint intervals, plus the causal and consistency
// predicates defined over them.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cic {

/// 1-based process index.
class ProcessId {
 public:
  constexpr ProcessId() = default;
  constexpr explicit ProcessId(int value) : value_(value) {}

  constexpr int value() const { return value_; }
  constexpr std::size_t index() const { return static_cast<std::size_t>(value_ - 1); }

  friend constexpr auto operator<=>(ProcessId, ProcessId) = default;

 private:
  int value_ = 0;
};

inline std::string to_string(ProcessId p) { return "P" + std::to_string(p.value()); }

enum class CheckpointKind { initial, basic, forced, virtual_terminal };

inline const char* to_string(CheckpointKind k) {
  switch (k) {
    case CheckpointKind::initial: return "initial";
    case CheckpointKind::basic: return "basic";
    case CheckpointKind::forced: return "forced";
    case CheckpointKind::virtual_terminal: return "virtual-terminal";
  }
  return "?";
}

/// Identity of C_i^x.
struct CheckpointId {
  ProcessId process;
  int ordinal = 0;

  friend constexpr auto operator<=>(const CheckpointId&, const CheckpointId&) = default;
};

inline std::string to_string(const CheckpointId& c) {
  return "C" + std::to_string(c.process.value()) + "^" + std::to_string(c.ordinal);
}

struct CheckpointRecord {
  ProcessId process;
  int ordinal = 0;
  CheckpointKind kind = CheckpointKind::basic;
  std::optional<int> timestamp;

  CheckpointId id() const { return {process, ordinal}; }
  bool operator==(const CheckpointRecord&) const = default;
};

enum class EventKind { internal, send, receive, checkpoint };

struct Event {
  ProcessId process;
  int ordinal = 0;  // 1-based position within the process
  EventKind kind = EventKind::internal;
  std::string message;             // send / receive
  ProcessId peer;                  // send: destination
  std::optional<CheckpointRecord> checkpoint;  // checkpoint events
  int step = -1;                   // originating scenario step, -1 if none

  bool operator==(const Event&) const = default;
};

/// Addresses an event by process and per-process ordinal.
struct EventRef {
  ProcessId process;
  int ordinal = 0;

  friend constexpr auto operator<=>(const EventRef&, const EventRef&) = default;
};

struct MessageInfo {
  ProcessId from;
  ProcessId to;
  std::size_t send_index = 0;                 // position in Trace::events
  std::optional<std::size_t> receive_index;   // empty while undelivered
};

struct Trace {
  int n = 0;
  std::vector<Event> events;  // global order

  /// Message table keyed by name. Throws std::invalid_argument on a
  /// duplicate send; receives without a send are skipped (see validate_trace).
  std::map<std::string, MessageInfo> messages() const {
    std::map<std::string, MessageInfo> table;
    for (std::size_t k = 0; k < events.size(); ++k) {
      const Event& e = events[k];
      if (e.kind == EventKind::send) {
        auto [it, inserted] = table.emplace(e.message, MessageInfo{e.process, e.peer, k, std::nullopt});
        if (!inserted) throw std::invalid_argument("duplicate send of message " + e.message);
      }
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
      const Event& e = events[k];
      if (e.kind != EventKind::receive) continue;
      auto it = table.find(e.message);
      if (it != table.end() && !it->second.receive_index) it->second.receive_index = k;
    }
    return table;
  }

  /// Checkpoint records of one process in program order.
  std::vector<CheckpointRecord> checkpoints_of(ProcessId p) const {
    std::vector<CheckpointRecord> out;
    for (const Event& e : events)
      if (e.process == p && e.kind == EventKind::checkpoint && e.checkpoint) out.push_back(*e.checkpoint);
    return out;
  }

  std::vector<CheckpointRecord> checkpoints() const {
    std::vector<CheckpointRecord> out;
    for (int p = 1; p <= n; ++p) {
      auto c = checkpoints_of(ProcessId{p});
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }

  std::optional<std::size_t> find(const EventRef& ref) const {
    for (std::size_t k = 0; k < events.size(); ++k)
      if (events[k].process == ref.process && events[k].ordinal == ref.ordinal) return k;
    return std::nullopt;
  }

  std::optional<std::size_t> find_checkpoint(const CheckpointId& c) const {
    for (std::size_t k = 0; k < events.size(); ++k) {
      const Event& e = events[k];
      if (e.kind == EventKind::checkpoint && e.checkpoint && e.process == c.process &&
          e.checkpoint->ordinal == c.ordinal)
        return k;
    }
    return std::nullopt;
  }

  bool operator==(const Trace&) const = default;
};

/// Appends events to a trace, assigning per-process and checkpoint ordinals.
class TraceBuilder {
 public:
  /// Starts a trace whose first n events are the initial checkpoints.
  explicit TraceBuilder(int n, std::optional<int> initial_timestamp = std::nullopt)
      : next_event_(n, 1), next_ckpt_(n, 1) {
    trace_.n = n;
    for (int p = 1; p <= n; ++p) checkpoint(ProcessId{p}, CheckpointKind::initial, initial_timestamp);
  }

  const CheckpointRecord& checkpoint(ProcessId p, CheckpointKind kind, std::optional<int> t = std::nullopt,
                                     int step = -1) {
    Event& e = push(p, EventKind::checkpoint, step);
    e.checkpoint = CheckpointRecord{p, next_ckpt_[p.index()]++, kind, t};
    return *e.checkpoint;
  }

  void send(ProcessId from, ProcessId to, std::string name, int step = -1) {
    Event& e = push(from, EventKind::send, step);
    e.message = std::move(name);
    e.peer = to;
  }

  void receive(ProcessId p, std::string name, int step = -1) {
    Event& e = push(p, EventKind::receive, step);
    e.message = std::move(name);
  }

  void internal(ProcessId p, int step = -1) { push(p, EventKind::internal, step); }

  /// Number of checkpoints p has taken so far.
  int checkpoint_count(ProcessId p) const { return next_ckpt_[p.index()] - 1; }

  const Trace& trace() const& { return trace_; }
  Trace trace() && { return std::move(trace_); }

 private:
  Event& push(ProcessId p, EventKind kind, int step) {
    if (p.value() < 1 || p.value() > trace_.n) throw std::out_of_range("process out of range: " + to_string(p));
    Event e;
    e.process = p;
    e.ordinal = next_event_[p.index()]++;
    e.kind = kind;
    e.step = step;
    trace_.events.push_back(std::move(e));
    return trace_.events.back();
  }

  Trace trace_;
  std::vector<int> next_event_;
  std::vector<int> next_ckpt_;
};

struct Violation {
  std::size_t event_index = 0;  // offending position in Trace::events
  std::string what;
};

/// Checks every structural Trace invariant; an empty result means valid.
inline std::vector<Violation> validate_trace(const Trace& trace) {
  std::vector<Violation> out;
  auto flag = [&](std::size_t k, std::string what) { out.push_back({k, std::move(what)}); };

  if (trace.n < 1) {
    out.push_back({0, "process count must be positive"});
    return out;
  }
  std::vector<int> next_event(trace.n, 1);
  std::vector<int> next_ckpt(trace.n, 1);
  std::map<std::string, std::pair<std::size_t, ProcessId>> sent;  // name -> (index, dest)
  std::map<std::string, std::size_t> received;

  for (std::size_t k = 0; k < trace.events.size(); ++k) {
    const Event& e = trace.events[k];
    if (e.process.value() < 1 || e.process.value() > trace.n) {
      flag(k, "event on unknown process " + to_string(e.process));
      continue;
    }
    const std::size_t p = e.process.index();
    if (e.ordinal != next_event[p])
      flag(k, "non-consecutive ordinal " + std::to_string(e.ordinal) + " on " + to_string(e.process));
    next_event[p] = e.ordinal + 1;

    if (next_event[p] == 2 && (e.kind != EventKind::checkpoint || !e.checkpoint ||
                               e.checkpoint->kind != CheckpointKind::initial))
      flag(k, "first event of " + to_string(e.process) + " is not its initial checkpoint");

    switch (e.kind) {
      case EventKind::checkpoint: {
        if (!e.checkpoint) {
          flag(k, "checkpoint event without record");
          break;
        }
        const CheckpointRecord& c = *e.checkpoint;
        if (c.process != e.process) flag(k, "checkpoint record names another process");
        if (c.ordinal != next_ckpt[p]) flag(k, "non-consecutive checkpoint ordinal on " + to_string(e.process));
        if ((c.ordinal == 1) != (c.kind == CheckpointKind::initial))
          flag(k, "only checkpoint ordinal 1 may be initial");
        if (c.kind == CheckpointKind::virtual_terminal) flag(k, "virtual-terminal checkpoint in a trace");
        if (c.timestamp && *c.timestamp < 1) flag(k, "checkpoint timestamp below 1");
        next_ckpt[p] = c.ordinal + 1;
        break;
      }
      case EventKind::send:
        if (e.peer == e.process) flag(k, "self-message " + e.message);
        else if (e.peer.value() < 1 || e.peer.value() > trace.n) flag(k, "send to unknown process");
        if (!sent.emplace(e.message, std::pair{k, e.peer}).second) flag(k, "message " + e.message + " sent twice");
        break;
      case EventKind::receive: {
        auto it = sent.find(e.message);
        if (it == sent.end()) {
          flag(k, "receive of " + e.message + " before its send");
        } else if (it->second.second != e.process) {
          flag(k, "message " + e.message + " received by a process other than its destination");
        }
        if (!received.emplace(e.message, k).second) flag(k, "message " + e.message + " received twice");
        break;
      }
      case EventKind::internal:
        break;
    }
  }
  for (int p = 0; p < trace.n; ++p)
    if (next_event[p] == 1) out.push_back({trace.events.size(), "process P" + std::to_string(p + 1) + " has no events"});
  return out;
}

/// Vector-clock view of a valid trace answering causal-precedence queries.
class CausalOrder {
 public:
  explicit CausalOrder(const Trace& trace) : trace_(&trace), clocks_(trace.events.size()) {
    std::vector<std::vector<int>> current(trace.n, std::vector<int>(trace.n, 0));
    std::map<std::string, std::size_t> send_at;
    for (std::size_t k = 0; k < trace.events.size(); ++k) {
      const Event& e = trace.events[k];
      auto& vc = current[e.process.index()];
      if (e.kind == EventKind::receive) {
        auto it = send_at.find(e.message);
        if (it != send_at.end()) {
          const auto& sc = clocks_[it->second];
          for (int q = 0; q < trace.n; ++q) vc[q] = std::max(vc[q], sc[q]);
        }
      }
      vc[e.process.index()] = e.ordinal;
      clocks_[k] = vc;
      if (e.kind == EventKind::send) send_at.emplace(e.message, k);
    }
  }

  /// e1 -> e2 for two positions in the global order.
  bool precedes(std::size_t e1, std::size_t e2) const {
    if (e1 == e2) return false;
    const Event& a = trace_->events.at(e1);
    return clocks_.at(e2)[a.process.index()] >= a.ordinal;
  }

  const std::vector<int>& clock(std::size_t k) const { return clocks_.at(k); }

 private:
  const Trace* trace_;
  std::vector<std::vector<int>> clocks_;
};

/// Program order, send/receive of one message, and their transitive closure.
inline bool causally_precedes(const EventRef& e1, const EventRef& e2, const Trace& trace) {
  auto a = trace.find(e1);
  auto b = trace.find(e2);
  if (!a || !b) throw std::invalid_argument("causally_precedes: event not in trace");
  return CausalOrder(trace).precedes(*a, *b);
}

struct Interval {
  ProcessId process;
  int index = 0;

  friend constexpr auto operator<=>(const Interval&, const Interval&) = default;
};

/// I_i^x containing the event at position k; a checkpoint opens its interval.
inline Interval interval_of(std::size_t k, const Trace& trace) {
  const Event& target = trace.events.at(k);
  int count = 0;
  for (std::size_t j = 0; j <= k; ++j) {
    const Event& e = trace.events[j];
    if (e.process == target.process && e.kind == EventKind::checkpoint) ++count;
  }
  return {target.process, count};
}

inline Interval interval_of(const EventRef& ref, const Trace& trace) {
  auto k = trace.find(ref);
  if (!k) throw std::invalid_argument("interval_of: event not in trace");
  return interval_of(*k, trace);
}

/// True iff no member causally precedes another.
inline bool is_consistent_global_checkpoint(const std::vector<CheckpointId>& set, const Trace& trace) {
  std::vector<std::size_t> positions;
  std::vector<bool> seen(trace.n, false);
  for (const CheckpointId& c : set) {
    if (c.process.value() < 1 || c.process.value() > trace.n)
      throw std::invalid_argument("global checkpoint names unknown process");
    if (seen[c.process.index()]) throw std::invalid_argument("duplicate process in global checkpoint");
    seen[c.process.index()] = true;
    auto k = trace.find_checkpoint(c);
    if (!k) throw std::invalid_argument("unknown checkpoint " + to_string(c));
    positions.push_back(*k);
  }
  if (static_cast<int>(set.size()) != trace.n)
    throw std::invalid_argument("global checkpoint needs exactly one checkpoint per process");
  CausalOrder order(trace);
  for (std::size_t a : positions)
    for (std::size_t b : positions)
      if (order.precedes(a, b)) return false;
  return true;
}

}  // namespace cic
