#pragma once

// Deterministic replay of a scenario through one protocol, the adversarial
// message insertion that turns a Z-consistency violation into a Z-cycle,
// and side-by-side protocol comparison.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cic/computation.hpp"
#include "cic/oracle.hpp"
#include "cic/protocols.hpp"
#include "cic/scenario.hpp"

namespace cic {

struct ForcedEvent {
  std::size_t step = 0;  // index of the triggering recv step
  std::string message;
  ProcessId process;
  ForcedDecision decision;
  ProtocolState pre_state;  // receiver state before the receive
  Piggyback payload;
  CheckpointRecord checkpoint;
};

struct StepLog {
  std::size_t step = 0;
  std::optional<Piggyback> piggyback;  // send / recv steps
  std::optional<ForcedDecision> decision;  // recv steps
  std::optional<ProtocolState> pre_state;  // recv steps: receiver before the receive
  int lc_after = 0;
};

struct AnnotatedTrace {
  ProtocolConfig config;
  Trace trace;
  std::vector<ForcedEvent> forced_events;
  std::vector<StepLog> log;
  std::vector<ProtocolState> final_states;

  std::size_t forced_count() const { return forced_events.size(); }

  /// Forced event triggered by the receive of `message`, if any.
  const ForcedEvent* forced_at(const std::string& message) const {
    for (const ForcedEvent& f : forced_events)
      if (f.message == message) return &f;
    return nullptr;
  }

  /// Piggyback attached to `message` when it was sent.
  const Piggyback* piggyback_of(const std::string& message) const {
    for (const StepLog& l : log)
      if (l.piggyback && trace_message_at(l.step) == message) return &*l.piggyback;
    return nullptr;
  }

  std::optional<int> timestamp(const CheckpointId& c) const {
    for (const CheckpointRecord& r : trace.checkpoints_of(c.process))
      if (r.ordinal == c.ordinal) return r.timestamp;
    return std::nullopt;
  }

  std::vector<std::string> step_messages;  // message name per step ("" for ckpt)

 private:
  std::string trace_message_at(std::size_t step) const {
    return step < step_messages.size() ? step_messages[step] : std::string{};
  }
};

class InvalidScenario : public std::invalid_argument {
 public:
  explicit InvalidScenario(std::vector<std::string> problems)
      : std::invalid_argument("invalid scenario: " + (problems.empty() ? std::string("?") : problems.front())),
        problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

inline AnnotatedTrace run_scenario(const Scenario& s, ProtocolConfig config) {
  if (auto problems = validate_scenario(s); !problems.empty()) throw InvalidScenario(std::move(problems));

  AnnotatedTrace out;
  out.config = config;
  std::vector<ProtocolState> states;
  states.reserve(static_cast<std::size_t>(s.n));

  out.trace.n = s.n;
  std::vector<int> next_event(static_cast<std::size_t>(s.n), 1);
  auto push = [&](Event e) {
    e.ordinal = next_event[e.process.index()]++;
    out.trace.events.push_back(std::move(e));
  };
  auto push_checkpoint = [&](const CheckpointRecord& c, int step) {
    Event e;
    e.process = c.process;
    e.kind = EventKind::checkpoint;
    e.checkpoint = c;
    e.step = step;
    push(std::move(e));
  };

  for (int p = 1; p <= s.n; ++p) {
    auto init = protocol_init(s.n, ProcessId{p}, config);
    states.push_back(std::move(init.state));
    push_checkpoint(init.initial, -1);
  }

  std::map<std::string, Piggyback> in_flight;
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const Step& st = s.steps[k];
    ProtocolState& state = states[st.process.index()];
    const int step = static_cast<int>(k);
    StepLog log{k, std::nullopt, std::nullopt, std::nullopt, 0};
    out.step_messages.push_back(st.kind == Step::Kind::ckpt ? std::string{} : st.message);

    switch (st.kind) {
      case Step::Kind::ckpt: {
        CheckpointRecord c = take_checkpoint(state);
        c.kind = st.forced ? CheckpointKind::forced : CheckpointKind::basic;
        push_checkpoint(c, step);
        break;
      }
      case Step::Kind::send: {
        Piggyback m = on_send(state, st.dest);
        log.piggyback = m;
        in_flight.emplace(st.message, m);
        Event e;
        e.process = st.process;
        e.kind = EventKind::send;
        e.message = st.message;
        e.peer = st.dest;
        e.step = step;
        push(std::move(e));
        break;
      }
      case Step::Kind::recv: {
        auto node = in_flight.extract(st.message);
        const Piggyback& m = node.mapped();
        ProtocolState pre = state;
        ReceiveResult r = on_receive(state, m);
        log.piggyback = m;
        log.decision = r.decision;
        log.pre_state = pre;
        if (r.forced) {
          push_checkpoint(*r.forced, step);
          out.forced_events.push_back({k, st.message, st.process, r.decision, std::move(pre), m, *r.forced});
        }
        Event e;
        e.process = st.process;
        e.kind = EventKind::receive;
        e.message = st.message;
        e.step = step;
        push(std::move(e));
        break;
      }
    }
    log.lc_after = state.lc;
    out.log.push_back(std::move(log));
  }
  out.final_states = std::move(states);
  return out;
}

inline AnnotatedTrace run_scenario(const Scenario& s, Protocol p) { return run_scenario(s, ProtocolConfig{p}); }

// ---- violation amplification ----------------------------------------------

struct AmplifyResult {
  bool amplified = false;
  std::string reason;  // set when nothing was amplified
  std::optional<ZConsistencyViolation> violation;
  std::string inserted_message;
  Scenario scenario;
  AnnotatedTrace trace;
  OracleReport report;
};

/// Picks the least unused name of the form m<k>.
inline std::string fresh_message_name(const Scenario& s) {
  std::set<std::string> used;
  for (const Step& st : s.steps)
    if (st.kind != Step::Kind::ckpt) used.insert(st.message);
  for (int k = 1;; ++k) {
    std::string name = "m" + std::to_string(k);
    if (!used.count(name)) return name;
  }
}

/// Given a violation C_i^x ⇝ C_j^y with C_i^x.t ≥ C_j^y.t, inserts a message
/// sent by P_j as the first event of I_j^y and received by P_i right after
/// the send of the witness's first message (or right after the new send when
/// that comes later), then replays.
inline AmplifyResult amplify_violation(const Scenario& s, ProtocolConfig config) {
  AmplifyResult out;
  AnnotatedTrace base = run_scenario(s, config);
  auto violations = check_z_consistency(base.trace);
  // A pair on one process cannot be closed by a message; such checkpoints
  // already sit on (or next to) a Z-cycle.
  std::erase_if(violations, [](const auto& v) { return v.from.process == v.to.process; });
  if (violations.empty()) {
    out.reason = check_z_consistency(base.trace).empty()
                     ? "nothing to amplify: the run is Z-consistent"
                     : "nothing to amplify: every violation joins two checkpoints of one process";
    out.scenario = s;
    out.trace = std::move(base);
    out.report = analyze(out.trace.trace);
    return out;
  }
  auto best = std::min_element(violations.begin(), violations.end(), [](const auto& a, const auto& b) {
    return std::pair{a.to.id(), a.from.id()} < std::pair{b.to.id(), b.from.id()};
  });
  const ZConsistencyViolation v = *best;
  out.violation = v;

  const Trace& t = base.trace;
  // The new send goes right after C_j^y's step. A forced checkpoint shares
  // its step with the receive that forced it, so the send follows that
  // receive, still inside I_j^y. Initial checkpoints precede every step.
  std::size_t send_pos = 0;
  {
    const Event& c = t.events.at(*t.find_checkpoint(v.to.id()));
    if (c.checkpoint->kind != CheckpointKind::initial) send_pos = static_cast<std::size_t>(c.step) + 1;
  }
  // Send step of the witness's first message.
  std::size_t first_send = 0;
  for (std::size_t k = 0; k < s.steps.size(); ++k)
    if (s.steps[k].kind == Step::Kind::send && s.steps[k].message == v.witness.messages.front()) first_send = k;

  out.inserted_message = fresh_message_name(s);
  Scenario next = s;
  next.steps.insert(next.steps.begin() + static_cast<std::ptrdiff_t>(send_pos),
                    Step::send(v.to.process.value(), v.from.process.value(), out.inserted_message));
  const std::size_t shifted_first_send = first_send >= send_pos ? first_send + 1 : first_send;
  const std::size_t recv_pos = std::max(shifted_first_send, send_pos) + 1;
  next.steps.insert(next.steps.begin() + static_cast<std::ptrdiff_t>(recv_pos),
                    Step::recv(v.from.process.value(), out.inserted_message));

  out.amplified = true;
  out.scenario = std::move(next);
  out.trace = run_scenario(out.scenario, config);
  out.report = analyze(out.trace.trace);
  return out;
}

inline AmplifyResult amplify_violation(const Scenario& s, Protocol p) { return amplify_violation(s, ProtocolConfig{p}); }

// ---- comparison ------------------------------------------------------------

struct ComparisonRow {
  ProtocolConfig config;
  std::size_t forced = 0;
  std::size_t checkpoints = 0;
  std::size_t useless = 0;
  bool z_consistent = true;
};

inline std::vector<ComparisonRow> compare_runs(const Scenario& s, const std::vector<ProtocolConfig>& configs) {
  std::vector<ComparisonRow> rows;
  for (const ProtocolConfig& c : configs) {
    AnnotatedTrace run = run_scenario(s, c);
    ComparisonRow row{c, run.forced_count(), run.trace.checkpoints().size(), useless_checkpoints(run.trace).size(),
                      check_z_consistency(run.trace).empty()};
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<ComparisonRow> compare_runs(const Scenario& s, const std::vector<Protocol>& protocols) {
  std::vector<ProtocolConfig> configs;
  for (Protocol p : protocols) configs.push_back({p});
  return compare_runs(s, configs);
}

}  // namespace cic
