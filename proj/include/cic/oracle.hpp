#pragma once

// Brute-force, protocol-independent ground truth over a finite trace:
// zigzag reachability, Z-cycles, useless checkpoints, Z-consistency of the
// assigned timestamps, and global-checkpoint membership by enumeration.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cic/computation.hpp"

namespace cic {

struct ZigzagWitness {
  CheckpointId from;
  CheckpointId to;
  std::vector<std::string> messages;
  bool causal = false;

  bool operator==(const ZigzagWitness&) const = default;
};

struct ZCycle {
  CheckpointId checkpoint;
  ZigzagWitness witness;
};

struct ZConsistencyViolation {
  CheckpointRecord from;
  CheckpointRecord to;
  ZigzagWitness witness;
};

struct OracleStats {
  std::size_t checkpoints = 0;
  std::size_t messages = 0;
  std::size_t delivered = 0;
  std::size_t z_cycles = 0;
  std::size_t useless = 0;
  std::size_t violations = 0;
};

struct OracleReport {
  std::vector<ZCycle> z_cycles;
  std::set<CheckpointId> useless;
  std::vector<ZConsistencyViolation> z_consistency_violations;
  OracleStats stats;

  bool clean() const { return useless.empty() && z_consistency_violations.empty(); }
};

struct OracleOptions {
  /// Cycle witnesses enumerated per checkpoint.
  std::size_t max_cycle_witnesses = 16;
  /// Longest cycle witness enumerated (in messages).
  std::size_t max_cycle_length = 12;
  /// Upper bound on global-checkpoint tuples examined by brute force.
  std::uint64_t membership_budget = 1'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interval-annotated message graph of one trace. Builds once, answers many
/// zigzag queries. Virtual terminal checkpoints C_i^{k+1} (k = real count)
/// are addressable by ordinal but never appear in the trace.
class ZigzagGraph {
 public:
  struct Msg {
    std::string name;
    ProcessId from;
    ProcessId to;
    int send_interval = 0;
    int recv_interval = 0;
    std::size_t send_index = 0;
    std::size_t recv_index = 0;
  };

  explicit ZigzagGraph(const Trace& trace) : trace_(&trace), counts_(trace.n, 0) {
    std::vector<int> interval(trace.n, 0);
    std::vector<int> event_interval(trace.events.size(), 0);
    for (std::size_t k = 0; k < trace.events.size(); ++k) {
      const Event& e = trace.events[k];
      if (e.kind == EventKind::checkpoint) ++interval[e.process.index()];
      event_interval[k] = interval[e.process.index()];
    }
    counts_ = interval;
    for (const auto& [name, info] : trace.messages()) {
      if (!info.receive_index) continue;
      msgs_.push_back(Msg{name, info.from, info.to, event_interval[info.send_index],
                          event_interval[*info.receive_index], info.send_index, *info.receive_index});
    }
    // msgs_ is sorted by name since trace.messages() is an ordered map.
    succ_.resize(msgs_.size());
    for (std::size_t a = 0; a < msgs_.size(); ++a)
      for (std::size_t b = 0; b < msgs_.size(); ++b)
        if (a != b && msgs_[b].from == msgs_[a].to && msgs_[b].send_interval >= msgs_[a].recv_interval)
          succ_[a].push_back(b);
  }

  const Trace& trace() const { return *trace_; }
  const std::vector<Msg>& messages() const { return msgs_; }
  int checkpoint_count(ProcessId p) const { return counts_.at(p.index()); }
  CheckpointId virtual_terminal(ProcessId p) const { return {p, checkpoint_count(p) + 1}; }
  bool is_virtual(const CheckpointId& c) const { return c.ordinal == checkpoint_count(c.process) + 1; }

  bool starts(std::size_t m, const CheckpointId& from) const {
    return msgs_[m].from == from.process && msgs_[m].send_interval >= from.ordinal;
  }
  bool ends(std::size_t m, const CheckpointId& to) const {
    return msgs_[m].to == to.process && msgs_[m].recv_interval < to.ordinal;
  }

  /// Shortest zigzag chain, lexicographically smallest among the shortest.
  std::optional<ZigzagWitness> shortest(const CheckpointId& from, const CheckpointId& to) const {
    const std::size_t none = msgs_.size();
    std::vector<std::size_t> parent(msgs_.size(), none);
    std::vector<bool> seen(msgs_.size(), false);
    std::deque<std::size_t> queue;
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (starts(m, from)) {
        seen[m] = true;
        queue.push_back(m);
      }
    while (!queue.empty()) {
      std::size_t m = queue.front();
      queue.pop_front();
      if (ends(m, to)) {
        std::vector<std::size_t> path;
        for (std::size_t at = m; at != none; at = parent[at]) path.push_back(at);
        std::reverse(path.begin(), path.end());
        return witness(from, to, path);
      }
      for (std::size_t next : succ_[m])
        if (!seen[next]) {
          seen[next] = true;
          parent[next] = m;
          queue.push_back(next);
        }
    }
    return std::nullopt;
  }

  /// Messages reachable by a zigzag chain starting after `from`.
  std::vector<bool> reachable_from(const CheckpointId& from) const {
    std::vector<bool> seen(msgs_.size(), false);
    std::deque<std::size_t> queue;
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (starts(m, from)) {
        seen[m] = true;
        queue.push_back(m);
      }
    while (!queue.empty()) {
      std::size_t m = queue.front();
      queue.pop_front();
      for (std::size_t next : succ_[m])
        if (!seen[next]) {
          seen[next] = true;
          queue.push_back(next);
        }
    }
    return seen;
  }

  bool zigzag(const CheckpointId& from, const CheckpointId& to) const {
    auto seen = reachable_from(from);
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (seen[m] && ends(m, to)) return true;
    return false;
  }

  /// Elementary (no repeated message) zigzag cycles through c, shortest first,
  /// lexicographic within a length.
  std::vector<ZigzagWitness> cycles(const CheckpointId& c, std::size_t max_count, std::size_t max_length) const {
    std::vector<ZigzagWitness> out;
    // Backward distance in messages to a chain end at c.
    const std::size_t inf = msgs_.size() + 1;
    std::vector<std::size_t> dist(msgs_.size(), inf);
    std::deque<std::size_t> queue;
    for (std::size_t m = 0; m < msgs_.size(); ++m)
      if (ends(m, c)) {
        dist[m] = 1;
        queue.push_back(m);
      }
    std::vector<std::vector<std::size_t>> pred(msgs_.size());
    for (std::size_t a = 0; a < msgs_.size(); ++a)
      for (std::size_t b : succ_[a]) pred[b].push_back(a);
    while (!queue.empty()) {
      std::size_t m = queue.front();
      queue.pop_front();
      for (std::size_t p : pred[m])
        if (dist[p] == inf) {
          dist[p] = dist[m] + 1;
          queue.push_back(p);
        }
    }

    std::vector<std::size_t> path;
    std::vector<bool> on_path(msgs_.size(), false);
    for (std::size_t length = 1; length <= max_length && out.size() < max_count; ++length) {
      for (std::size_t m = 0; m < msgs_.size() && out.size() < max_count; ++m) {
        if (!starts(m, c) || dist[m] > length) continue;
        path.assign(1, m);
        on_path[m] = true;
        extend(c, length, dist, path, on_path, out, max_count);
        on_path[m] = false;
      }
    }
    return out;
  }

  ZigzagWitness witness(const CheckpointId& from, const CheckpointId& to, const std::vector<std::size_t>& path) const {
    ZigzagWitness w{from, to, {}, true};
    for (std::size_t z = 0; z < path.size(); ++z) {
      w.messages.push_back(msgs_[path[z]].name);
      if (z > 0 && msgs_[path[z - 1]].recv_index > msgs_[path[z]].send_index) w.causal = false;
    }
    return w;
  }

 private:
  void extend(const CheckpointId& c, std::size_t length, const std::vector<std::size_t>& dist,
              std::vector<std::size_t>& path, std::vector<bool>& on_path, std::vector<ZigzagWitness>& out,
              std::size_t max_count) const {
    if (out.size() >= max_count) return;
    const std::size_t last = path.back();
    if (path.size() == length) {
      if (ends(last, c)) out.push_back(witness(c, c, path));
      return;
    }
    const std::size_t remaining = length - path.size();
    for (std::size_t next : succ_[last]) {
      if (on_path[next] || dist[next] > remaining) continue;
      path.push_back(next);
      on_path[next] = true;
      extend(c, length, dist, path, on_path, out, max_count);
      on_path[next] = false;
      path.pop_back();
    }
  }

  const Trace* trace_;
  std::vector<int> counts_;
  std::vector<Msg> msgs_;
  std::vector<std::vector<std::size_t>> succ_;
};

/// A zigzag chain from `from` to `to`, if one exists (virtual terminals allowed).
inline std::optional<ZigzagWitness> zigzag_exists(const CheckpointId& from, const CheckpointId& to,
                                                  const Trace& trace) {
  return ZigzagGraph(trace).shortest(from, to);
}

inline std::vector<ZCycle> find_z_cycles(const Trace& trace, const OracleOptions& options = {}) {
  ZigzagGraph graph(trace);
  std::vector<ZCycle> out;
  for (const CheckpointRecord& c : trace.checkpoints()) {
    if (!graph.zigzag(c.id(), c.id())) continue;
    auto found = graph.cycles(c.id(), options.max_cycle_witnesses, options.max_cycle_length);
    // A cycle longer than max_cycle_length still makes c useless.
    if (found.empty()) found.push_back(*graph.shortest(c.id(), c.id()));
    for (auto& w : found) out.push_back({c.id(), std::move(w)});
  }
  return out;
}

inline std::set<CheckpointId> useless_checkpoints(const Trace& trace) {
  ZigzagGraph graph(trace);
  std::set<CheckpointId> out;
  for (const CheckpointRecord& c : trace.checkpoints())
    if (graph.zigzag(c.id(), c.id())) out.insert(c.id());
  return out;
}

/// One entry per ordered checkpoint pair joined by a zigzag path whose
/// timestamps fail to increase along it.
inline std::vector<ZConsistencyViolation> check_z_consistency(const Trace& trace) {
  ZigzagGraph graph(trace);
  const auto all = trace.checkpoints();
  for (const CheckpointRecord& c : all)
    if (!c.timestamp) throw std::invalid_argument("check_z_consistency: " + to_string(c.id()) + " has no timestamp");

  std::vector<ZConsistencyViolation> out;
  for (const CheckpointRecord& a : all) {
    auto seen = graph.reachable_from(a.id());
    for (const CheckpointRecord& b : all) {
      if (*a.timestamp < *b.timestamp) continue;
      bool hit = false;
      for (std::size_t m = 0; m < graph.messages().size() && !hit; ++m) hit = seen[m] && graph.ends(m, b.id());
      if (hit) out.push_back({a, b, *graph.shortest(a.id(), b.id())});
    }
  }
  return out;
}

/// Checkpoints belonging to at least one consistent global checkpoint, found
/// by enumerating every one-per-process tuple (virtual terminals included)
/// and testing causal independence directly. Throws BudgetExceeded when the
/// tuple count exceeds the budget.
inline std::set<CheckpointId> consistent_membership_bruteforce(const Trace& trace,
                                                               std::uint64_t budget = 1'000'000) {
  const int n = trace.n;
  CausalOrder order(trace);

  struct Slot {
    CheckpointId id;
    std::optional<std::size_t> position;  // empty for the virtual terminal
  };
  std::vector<std::vector<Slot>> choices(n);
  std::vector<std::optional<std::size_t>> last_event(n);
  for (std::size_t k = 0; k < trace.events.size(); ++k) {
    const Event& e = trace.events[k];
    last_event[e.process.index()] = k;
    if (e.kind == EventKind::checkpoint && e.checkpoint) choices[e.process.index()].push_back({e.checkpoint->id(), k});
  }
  std::uint64_t tuples = 1;
  for (int p = 0; p < n; ++p) {
    choices[p].push_back({{ProcessId{p + 1}, static_cast<int>(choices[p].size()) + 1}, std::nullopt});
    tuples *= choices[p].size();
    if (tuples > budget) throw BudgetExceeded("membership enumeration exceeds budget");
  }

  // precedes(a, b) for members of distinct processes; a virtual terminal sits
  // after the last event of its process.
  auto precedes = [&](const Slot& a, const Slot& b) {
    if (!a.position) return false;
    if (b.position) return order.precedes(*a.position, *b.position);
    const auto& last = last_event[b.id.process.index()];
    return last && (*last == *a.position || order.precedes(*a.position, *last));
  };

  std::set<CheckpointId> useful;
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    bool consistent = true;
    for (int a = 0; a < n && consistent; ++a)
      for (int b = 0; b < n && consistent; ++b)
        if (a != b && precedes(choices[a][pick[a]], choices[b][pick[b]])) consistent = false;
    if (consistent)
      for (int p = 0; p < n; ++p)
        if (choices[p][pick[p]].position) useful.insert(choices[p][pick[p]].id);
    int p = 0;
    while (p < n && ++pick[p] == choices[p].size()) pick[p++] = 0;
    if (p == n) break;
  }
  return useful;
}

/// Full report. Z-consistency is only checked when every checkpoint carries
/// a timestamp.
inline OracleReport analyze(const Trace& trace, const OracleOptions& options = {}) {
  OracleReport r;
  r.z_cycles = find_z_cycles(trace, options);
  for (const ZCycle& z : r.z_cycles) r.useless.insert(z.checkpoint);
  const auto all = trace.checkpoints();
  bool stamped = std::all_of(all.begin(), all.end(), [](const CheckpointRecord& c) { return c.timestamp.has_value(); });
  if (stamped) r.z_consistency_violations = check_z_consistency(trace);

  const auto table = trace.messages();
  r.stats.checkpoints = all.size();
  r.stats.messages = table.size();
  r.stats.delivered = static_cast<std::size_t>(
      std::count_if(table.begin(), table.end(), [](const auto& kv) { return kv.second.receive_index.has_value(); }));
  r.stats.z_cycles = r.z_cycles.size();
  r.stats.useless = r.useless.size();
  r.stats.violations = r.z_consistency_violations.size();
  return r;
}

}  // namespace cic
