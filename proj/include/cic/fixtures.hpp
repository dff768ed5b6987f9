#pragma once

// Built-in scenarios, each bound to machine-checkable claims that are
// verified by replaying it through the simulator and the oracle.
//
// Only some facts are fixed for each scenario (message timestamps, vector
// entries, which receives force a checkpoint, which checkpoints are
// useless). The event orders below make all of them hold at once; the
// claims re-check them.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cic/oracle.hpp"
#include "cic/scenario.hpp"
#include "cic/simulator.hpp"

namespace cic {

/// Lazily computed runs of one scenario, shared by the claims checking it.
class ClaimContext {
 public:
  explicit ClaimContext(const Scenario& s) : scenario_(&s) {}

  const Scenario& scenario() const { return *scenario_; }

  const AnnotatedTrace& run(const ProtocolConfig& c) {
    auto key = std::pair{c.protocol, c.taken_index};
    auto it = runs_.find(key);
    if (it == runs_.end()) it = runs_.emplace(key, run_scenario(*scenario_, c)).first;
    return it->second;
  }

  const OracleReport& report(const ProtocolConfig& c) {
    auto key = std::pair{c.protocol, c.taken_index};
    auto it = reports_.find(key);
    if (it == reports_.end()) it = reports_.emplace(key, analyze(run(c).trace)).first;
    return it->second;
  }

 private:
  const Scenario* scenario_;
  std::map<std::pair<Protocol, TakenIndex>, AnnotatedTrace> runs_;
  std::map<std::pair<Protocol, TakenIndex>, OracleReport> reports_;
};

/// One assertion about a fixture. `check` returns an explanation on failure.
struct FixtureClaim {
  std::string description;
  std::string source;  // diagram or remark the claim encodes
  ProtocolConfig config;
  std::function<std::optional<std::string>(ClaimContext&)> check;
};

struct Fixture {
  std::string name;
  std::string summary;
  Scenario scenario;
  std::vector<FixtureClaim> claims;
};

struct ClaimResult {
  std::string description;
  std::string source;
  bool ok = false;
  std::string detail;
};

inline std::vector<ClaimResult> verify_fixture(const Fixture& f) {
  ClaimContext ctx(f.scenario);
  std::vector<ClaimResult> out;
  for (const FixtureClaim& c : f.claims) {
    ClaimResult r{c.description, c.source, true, {}};
    try {
      if (auto failure = c.check(ctx)) {
        r.ok = false;
        r.detail = *failure;
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---- claim builders --------------------------------------------------------

namespace claims {

using Check = std::function<std::optional<std::string>(ClaimContext&)>;

inline std::string label(const ProtocolConfig& c) {
  std::string s(protocol_name(c.protocol));
  if (c.taken_index == TakenIndex::receiver) s += "/receiver-taken";
  return s;
}

inline CheckpointId ck(int p, int x) { return {ProcessId{p}, x}; }

inline std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k];
  return s + "]";
}

inline FixtureClaim make(std::string description, std::string source, ProtocolConfig c, Check check) {
  return {label(c) + ": " + std::move(description), std::move(source), c, std::move(check)};
}

inline FixtureClaim forced_at(ProtocolConfig c, const std::string& m, std::optional<ForcedDecision> exactly,
                              std::string source) {
  std::string what = "forced checkpoint before delivering " + m;
  if (exactly) what += std::string(" (fired:") + (exactly->c1 ? " C1" : "") + (exactly->c2 ? " C2" : "") + ")";
  return make(what, std::move(source), c, [c, m, exactly](ClaimContext& ctx) -> std::optional<std::string> {
    const ForcedEvent* f = ctx.run(c).forced_at(m);
    if (!f) return "no forced checkpoint at " + m;
    if (exactly && !(f->decision == *exactly))
      return std::string("fired C1=") + (f->decision.c1 ? "T" : "F") + " C2=" + (f->decision.c2 ? "T" : "F");
    return std::nullopt;
  });
}

inline FixtureClaim not_forced_at(ProtocolConfig c, const std::string& m, std::string source) {
  return make("no forced checkpoint before delivering " + m, std::move(source), c,
              [c, m](ClaimContext& ctx) -> std::optional<std::string> {
                if (ctx.run(c).forced_at(m)) return "checkpoint forced at " + m;
                return std::nullopt;
              });
}

inline FixtureClaim forced_count(ProtocolConfig c, std::size_t n, std::string source) {
  return make(std::to_string(n) + " forced checkpoint(s)", std::move(source), c,
              [c, n](ClaimContext& ctx) -> std::optional<std::string> {
                auto got = ctx.run(c).forced_count();
                if (got != n) return "forced " + std::to_string(got);
                return std::nullopt;
              });
}

inline FixtureClaim zigzag(ProtocolConfig c, CheckpointId from, CheckpointId to, std::vector<std::string> msgs,
                           bool causal, std::string source) {
  return make("zigzag " + to_string(from) + " -> " + to_string(to) + " via " + join(msgs) +
                  (causal ? " (causal)" : " (non-causal)"),
              std::move(source), c, [=](ClaimContext& ctx) -> std::optional<std::string> {
                auto w = ZigzagGraph(ctx.run(c).trace).shortest(from, to);
                if (!w) return "no zigzag path";
                if (w->messages != msgs) return "witness " + join(w->messages);
                if (w->causal != causal) return std::string("causal=") + (w->causal ? "true" : "false");
                return std::nullopt;
              });
}

inline FixtureClaim z_cycle(ProtocolConfig c, CheckpointId at, std::vector<std::string> msgs, std::string source) {
  return make("Z-cycle " + join(msgs) + " through " + to_string(at), std::move(source), c,
              [=](ClaimContext& ctx) -> std::optional<std::string> {
                for (const ZCycle& z : ctx.report(c).z_cycles)
                  if (z.checkpoint == at && z.witness.messages == msgs) return std::nullopt;
                return "cycle not reported";
              });
}

inline FixtureClaim useless(ProtocolConfig c, std::set<CheckpointId> expected, std::string source) {
  std::string names;
  for (const auto& x : expected) names += (names.empty() ? "" : ", ") + to_string(x);
  return make("useless checkpoints = {" + names + "}", std::move(source), c,
              [=](ClaimContext& ctx) -> std::optional<std::string> {
                const auto& got = ctx.report(c).useless;
                if (got == expected) return std::nullopt;
                std::string s = "got {";
                for (const auto& x : got) s += " " + to_string(x);
                return s + " }";
              });
}

inline FixtureClaim violation(ProtocolConfig c, CheckpointId from, CheckpointId to, std::string source) {
  return make("Z-consistency violation " + to_string(from) + " -> " + to_string(to), std::move(source), c,
              [=](ClaimContext& ctx) -> std::optional<std::string> {
                for (const auto& v : ctx.report(c).z_consistency_violations)
                  if (v.from.id() == from && v.to.id() == to) return std::nullopt;
                return "violation not reported";
              });
}

inline FixtureClaim z_consistent(ProtocolConfig c, std::string source) {
  return make("Z-consistent and free of useless checkpoints", std::move(source), c,
              [c](ClaimContext& ctx) -> std::optional<std::string> {
                const auto& r = ctx.report(c);
                if (!r.clean())
                  return std::to_string(r.useless.size()) + " useless, " +
                         std::to_string(r.z_consistency_violations.size()) + " violation(s)";
                return std::nullopt;
              });
}

inline FixtureClaim timestamp(ProtocolConfig c, CheckpointId at, int t, std::string source) {
  return make(to_string(at) + ".t = " + std::to_string(t), std::move(source), c,
              [=](ClaimContext& ctx) -> std::optional<std::string> {
                auto got = ctx.run(c).timestamp(at);
                if (!got) return "no such checkpoint";
                if (*got != t) return "t = " + std::to_string(*got);
                return std::nullopt;
              });
}

inline FixtureClaim consistent_global(ProtocolConfig c, std::vector<CheckpointId> set, bool expected,
                                      std::string source) {
  std::string names;
  for (const auto& x : set) names += (names.empty() ? "" : ", ") + to_string(x);
  return make("{" + names + "} is " + (expected ? "" : "not ") + "a consistent global checkpoint", std::move(source),
              c, [=](ClaimContext& ctx) -> std::optional<std::string> {
                if (is_consistent_global_checkpoint(set, ctx.run(c).trace) != expected) return "predicate disagrees";
                return std::nullopt;
              });
}

/// Piggyback scalar of message m: field "t", or a vector field entry.
inline FixtureClaim carries(ProtocolConfig c, const std::string& m, const std::string& field, int proc, int value,
                            std::string source) {
  std::string what = m + "." + field + (proc ? "[" + std::to_string(proc) + "]" : "") + " = " + std::to_string(value);
  return make(what, std::move(source), c, [=](ClaimContext& ctx) -> std::optional<std::string> {
    const Piggyback* pb = ctx.run(c).piggyback_of(m);
    if (!pb) return "message not sent";
    std::optional<int> got;
    const std::size_t k = static_cast<std::size_t>(proc - 1);
    if (field == "t") got = pb->t;
    else if (field == "greater" && pb->greater) got = pb->greater->at(k);
    else if (field == "equal_incr" && pb->equal_incr) got = pb->equal_incr->at(k);
    else if (field == "taken" && pb->taken) got = pb->taken->at(k);
    else if (field == "clockv" && pb->clockv) got = pb->clockv->at(k);
    else if (field == "ckptv" && pb->ckptv) got = pb->ckptv->at(k);
    if (!got) return "field absent";
    if (*got != value) return "value " + std::to_string(*got);
    return std::nullopt;
  });
}

/// Receiver state right before the receive of m: "lc" or "clockv[k]".
inline FixtureClaim before_receive(ProtocolConfig c, const std::string& m, const std::string& field, int proc,
                                   int value, std::string source) {
  std::string what = "before receiving " + m + ": " + field + (proc ? "[" + std::to_string(proc) + "]" : "") +
                     " = " + std::to_string(value);
  return make(what, std::move(source), c, [=](ClaimContext& ctx) -> std::optional<std::string> {
    const AnnotatedTrace& run = ctx.run(c);
    for (const StepLog& l : run.log) {
      if (!l.pre_state || ctx.scenario().steps[l.step].message != m) continue;
      int got = field == "lc" ? l.pre_state->lc : l.pre_state->clockv.at(static_cast<std::size_t>(proc - 1));
      if (got != value) return "value " + std::to_string(got);
      return std::nullopt;
    }
    return "message not received";
  });
}

inline FixtureClaim receive_interval(ProtocolConfig c, const std::string& m, int p, int x, std::string source) {
  return make("receive of " + m + " lies in I" + std::to_string(p) + "^" + std::to_string(x), std::move(source), c,
              [=](ClaimContext& ctx) -> std::optional<std::string> {
                const Trace& t = ctx.run(c).trace;
                auto table = t.messages();
                auto it = table.find(m);
                if (it == table.end() || !it->second.receive_index) return "not received";
                Interval got = interval_of(*it->second.receive_index, t);
                if (got.process != ProcessId{p} || got.index != x)
                  return "interval I" + std::to_string(got.process.value()) + "^" + std::to_string(got.index);
                return std::nullopt;
              });
}

}  // namespace claims

// ---- registry --------------------------------------------------------------

class UnknownFixture : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline Scenario script(int n, std::vector<Step> steps) { return Scenario{n, std::move(steps)}; }

using S = Step;
inline constexpr ProtocolConfig kNone{Protocol::none};
inline constexpr ProtocolConfig kPi{Protocol::pi};
inline constexpr ProtocolConfig kFi{Protocol::fi_greater};
inline constexpr ProtocolConfig kFiClockv{Protocol::fi_clockv};
inline constexpr ProtocolConfig kLazyFi{Protocol::lazy_fi};
inline constexpr ProtocolConfig kFine{Protocol::fine};
inline constexpr ProtocolConfig kFineReceiver{Protocol::fine, TakenIndex::receiver};
inline constexpr ProtocolConfig kLazyFine{Protocol::lazy_fine};
inline constexpr ProtocolConfig kLazyFineReceiver{Protocol::lazy_fine, TakenIndex::receiver};

// P1 and P2 exchange m4/m5 around P2's second interval while P3's message m6
// arrives at P2 after P2 has already sent m3 and m5 in that interval.
inline Scenario ccp_steps(bool with_forced) {
  std::vector<Step> s{S::send(1, 2, "m1"), S::recv(2, "m1"), S::checkpoint(1),   S::send(2, 3, "m2"),
                      S::recv(3, "m2"),    S::checkpoint(2), S::checkpoint(3),   S::send(1, 2, "m4"),
                      S::send(2, 3, "m3"), S::send(2, 1, "m5"), S::recv(3, "m3"), S::checkpoint(3),
                      S::send(3, 2, "m6"), S::recv(2, "m4")};
  if (with_forced) s.push_back(S::checkpoint(2, true));
  s.insert(s.end(), {S::recv(2, "m6"), S::recv(1, "m5"), S::checkpoint(1)});
  return script(3, std::move(s));
}

inline Fixture ccp() {
  using namespace claims;
  const std::string src = "basic pattern, no protocol";
  return {"ccp",
          "three processes, six messages, basic checkpoints only; C3^3 is useless",
          ccp_steps(false),
          {zigzag(kNone, ck(1, 1), ck(3, 2), {"m1", "m2"}, true, src),
           zigzag(kNone, ck(1, 2), ck(3, 3), {"m4", "m3"}, false, src),
           z_cycle(kNone, ck(3, 3), {"m6", "m3"}, src),
           z_cycle(kNone, ck(3, 3), {"m6", "m5", "m4", "m3"}, src),
           useless(kNone, {ck(3, 3)}, src),
           consistent_global(kNone, {ck(1, 2), ck(2, 2), ck(3, 2)}, true, src),
           consistent_global(kNone, {ck(1, 1), ck(2, 1), ck(3, 1)}, true, src),
           consistent_global(kNone, {ck(1, 1), ck(2, 1), ck(3, 2)}, false, src),
           timestamp(kNone, ck(3, 3), 3, src),
           timestamp(kNone, ck(1, 3), 3, src),
           violation(kNone, ck(3, 3), ck(1, 3), src),
           forced_count(kFi, 1, "FI on the basic pattern"),
           forced_count(kFiClockv, 1, "FI on the basic pattern"),
           z_consistent(kFi, "FI on the basic pattern"),
           z_consistent(kFiClockv, "FI on the basic pattern"),
           z_consistent(kPi, "PI on the basic pattern")}};
}

inline Fixture z_consistent_fixture() {
  using namespace claims;
  const std::string src = "basic pattern plus one forced checkpoint";
  return {"z-consistent",
          "the ccp pattern plus one forced checkpoint on P2 before m6 is delivered",
          ccp_steps(true),
          {z_consistent(kNone, src), useless(kNone, {}, src), timestamp(kNone, ck(2, 3), 3, src),
           timestamp(kNone, ck(3, 3), 3, src), timestamp(kNone, ck(1, 3), 3, src), forced_count(kFi, 0, src)}};
}

inline Fixture strict_a() {
  using namespace claims;
  const std::string src = "C_PI with equal timestamps on the chain";
  return {"strict-a",
          "zigzag [m2, m1] with m2.t = m1.t: no forced checkpoint",
          script(3, {S::checkpoint(1), S::checkpoint(2), S::send(2, 3, "m1"), S::send(1, 2, "m2"), S::recv(2, "m2"),
                     S::recv(3, "m1"), S::checkpoint(3)}),
          {carries(kPi, "m1", "t", 0, 2, src), carries(kPi, "m2", "t", 0, 2, src), not_forced_at(kPi, "m2", src),
           zigzag(kPi, ck(1, 2), ck(3, 2), {"m2", "m1"}, false, src), z_consistent(kPi, src)}};
}

inline Fixture strict_b() {
  using namespace claims;
  const std::string src = "C_PI with growing timestamps on the chain";
  return {"strict-b",
          "zigzag [m2, m1] with m2.t > m1.t: P2 is forced before m2; P3 is not forced before m1",
          script(3, {S::checkpoint(1), S::checkpoint(1), S::checkpoint(2), S::send(2, 3, "m1"), S::send(1, 2, "m2"),
                     S::recv(2, "m2"), S::recv(3, "m1"), S::checkpoint(3)}),
          {carries(kPi, "m1", "t", 0, 2, src), carries(kPi, "m2", "t", 0, 3, src),
           forced_at(kPi, "m2", ForcedDecision{true, false}, src), not_forced_at(kPi, "m1", src),
           before_receive(kPi, "m1", "lc", 0, 1, src), z_consistent(kPi, src),
           violation(kNone, ck(1, 3), ck(3, 2), src)}};
}

inline Fixture clockv_a() {
  using namespace claims;
  const std::string src = "clockv entry carried by the message";
  return {"clockv-a",
          "P2 receives m3 carrying clockv[3] = 2: C_PI holds but FI does not force",
          script(3, {S::send(2, 3, "m1"), S::checkpoint(3), S::send(3, 1, "m2"), S::checkpoint(1), S::recv(1, "m2"),
                     S::send(1, 2, "m3"), S::recv(2, "m3"), S::recv(3, "m1"), S::checkpoint(3)}),
          {carries(kFiClockv, "m1", "t", 0, 1, src), carries(kFiClockv, "m3", "t", 0, 2, src),
           carries(kFiClockv, "m3", "clockv", 3, 2, src), not_forced_at(kFiClockv, "m3", src),
           not_forced_at(kFi, "m3", src), forced_at(kPi, "m3", ForcedDecision{true, false}, src),
           zigzag(kFiClockv, ck(1, 2), ck(3, 3), {"m3", "m1"}, false, src), timestamp(kFiClockv, ck(1, 2), 2, src),
           timestamp(kFiClockv, ck(3, 3), 3, src), z_consistent(kFiClockv, src)}};
}

inline Fixture clockv_b() {
  using namespace claims;
  const std::string src = "clockv entry learnt earlier in the interval";
  return {"clockv-b",
          "P2 learns clockv[3] = 2 from m2, so neither m2 nor m3 forces a checkpoint",
          script(3, {S::send(2, 3, "m1"), S::checkpoint(3), S::send(3, 2, "m2"), S::checkpoint(1), S::send(1, 2, "m3"),
                     S::recv(2, "m2"), S::recv(2, "m3"), S::recv(3, "m1"), S::checkpoint(3)}),
          {carries(kFiClockv, "m2", "t", 0, 2, src), carries(kFiClockv, "m2", "clockv", 3, 2, src),
           carries(kFiClockv, "m3", "t", 0, 2, src), not_forced_at(kFiClockv, "m2", src),
           not_forced_at(kFiClockv, "m3", src), before_receive(kFiClockv, "m3", "clockv", 3, 2, src),
           not_forced_at(kFi, "m2", src), not_forced_at(kFi, "m3", src),
           forced_at(kPi, "m2", ForcedDecision{true, false}, src),
           zigzag(kFiClockv, ck(1, 2), ck(3, 3), {"m3", "m1"}, false, src), z_consistent(kFiClockv, src)}};
}

inline Fixture greater_c() {
  using namespace claims;
  const std::string src = "greater entry carried by the message";
  return {"greater-c",
          "m3.t > lc_2 and m3.greater[3]: P2 is forced before m3",
          script(3, {S::send(2, 3, "m1"), S::send(3, 2, "m2"), S::recv(2, "m2"), S::checkpoint(1), S::send(1, 2, "m3"),
                     S::recv(2, "m3"), S::recv(3, "m1"), S::checkpoint(3)}),
          {carries(kFi, "m2", "t", 0, 1, src), not_forced_at(kFi, "m2", src), carries(kFi, "m3", "t", 0, 2, src),
           carries(kFi, "m3", "greater", 3, 1, src), forced_at(kFi, "m3", ForcedDecision{true, false}, src),
           forced_at(kFiClockv, "m3", ForcedDecision{true, false}, src), forced_count(kFi, 1, src),
           z_consistent(kFi, src), violation(kNone, ck(1, 2), ck(3, 2), src)}};
}

inline Fixture taken() {
  using namespace claims;
  const std::string src = "C2 breaking a cycle";
  return {"taken",
          "m3.greater[3] is false, yet C_FI2 forces P2 to break the Z-cycle [m2, m3, m1]",
          script(3, {S::send(2, 3, "m1"), S::recv(3, "m1"), S::checkpoint(3), S::send(3, 1, "m2"), S::recv(1, "m2"),
                     S::send(1, 2, "m3"), S::recv(2, "m3")}),
          {carries(kFi, "m3", "t", 0, 2, src), carries(kFi, "m3", "greater", 3, 0, src),
           carries(kFi, "m3", "taken", 2, 1, src), forced_at(kFi, "m3", ForcedDecision{false, true}, src),
           z_consistent(kFi, src), z_cycle(kNone, ck(3, 2), {"m2", "m3", "m1"}, src),
           useless(kNone, {ck(3, 2)}, src)}};
}

inline Fixture lazy_a() {
  using namespace claims;
  const std::string src = "lazy clock, older message";
  return {"lazy-a",
          "m1.t < C2^2.t: the next basic checkpoint reuses the timestamp",
          script(3, {S::send(3, 2, "m0"), S::recv(2, "m0"), S::checkpoint(2), S::send(1, 2, "m1"), S::recv(2, "m1"),
                     S::checkpoint(2)}),
          {timestamp(kLazyFi, ck(2, 2), 2, src), carries(kLazyFi, "m1", "t", 0, 1, src),
           timestamp(kLazyFi, ck(2, 3), 2, src), z_consistent(kLazyFi, src)}};
}

inline Fixture lazy_b() {
  using namespace claims;
  const std::string src = "lazy clock, same-clock message";
  return {"lazy-b",
          "m1.t = C2^2.t: the clock must advance for the next basic checkpoint",
          script(3, {S::send(3, 2, "m0"), S::recv(2, "m0"), S::checkpoint(2), S::send(3, 1, "m2"), S::recv(1, "m2"),
                     S::checkpoint(1), S::send(1, 2, "m1"), S::recv(2, "m1"), S::checkpoint(2)}),
          {timestamp(kLazyFi, ck(2, 2), 2, src), carries(kLazyFi, "m1", "t", 0, 2, src),
           timestamp(kLazyFi, ck(2, 3), 3, src), z_consistent(kLazyFi, src)}};
}

inline Fixture lazy_c() {
  using namespace claims;
  const std::string src = "lazy clock, newer message";
  return {"lazy-c",
          "m1.t > C2^1.t: the clock must advance for the next basic checkpoint",
          script(3, {S::send(3, 1, "m2"), S::recv(1, "m2"), S::checkpoint(1), S::send(1, 2, "m1"), S::recv(2, "m1"),
                     S::checkpoint(2)}),
          {timestamp(kLazyFi, ck(2, 1), 1, src), carries(kLazyFi, "m1", "t", 0, 2, src),
           timestamp(kLazyFi, ck(2, 2), 3, src), z_consistent(kLazyFi, src)}};
}

inline Fixture lazy_greater_a() {
  using namespace claims;
  const std::string src = "equal_incr entry unset";
  return {"lazy-greater-a",
          "m5 says P3 reached the same clock but not whether P3 will advance it: Lazy-FI forces",
          script(3, {S::send(2, 3, "m1"), S::send(1, 3, "m2"), S::recv(3, "m2"), S::checkpoint(3), S::send(3, 1, "m3"),
                     S::recv(1, "m3"), S::send(1, 2, "m5"), S::recv(2, "m5"), S::recv(3, "m1")}),
          {carries(kLazyFi, "m5", "t", 0, 2, src), carries(kLazyFi, "m5", "equal_incr", 3, 0, src),
           forced_at(kLazyFi, "m5", ForcedDecision{true, false}, src), carries(kFi, "m5", "greater", 3, 0, src),
           not_forced_at(kFi, "m5", src), z_consistent(kLazyFi, src)}};
}

inline Fixture lazy_greater_b() {
  using namespace claims;
  const std::string src = "equal_incr entry set via P5";
  return {"lazy-greater-b",
          "an extra message from P5 makes P3 advance its clock; m7 carries that and P2 is not forced",
          script(5, {S::send(2, 3, "m1"), S::send(1, 3, "m2"), S::recv(3, "m2"), S::checkpoint(3), S::send(3, 5, "m3"),
                     S::recv(5, "m3"), S::send(5, 3, "m4"), S::recv(3, "m4"), S::send(3, 1, "m5"), S::recv(1, "m5"),
                     S::send(1, 2, "m7"), S::recv(2, "m7"), S::recv(3, "m1")}),
          {carries(kLazyFi, "m7", "t", 0, 2, src), carries(kLazyFi, "m7", "equal_incr", 3, 1, src),
           not_forced_at(kLazyFi, "m7", src), forced_at(kLazyFi, "m5", ForcedDecision{false, true}, src),
           z_consistent(kLazyFi, src)}};
}

inline Fixture lazy_greater_c() {
  using namespace claims;
  const std::string src = "C2 under Lazy-FI";
  return {"lazy-greater-c",
          "m7 reports that P3 will advance its clock, yet C2 forces P2 to break the Z-cycle [m7, m4, m6]",
          script(5, {S::send(2, 3, "m4"), S::recv(3, "m4"), S::send(3, 1, "m6"), S::recv(1, "m6"), S::checkpoint(1),
                     S::checkpoint(3), S::send(3, 5, "m2"), S::recv(5, "m2"), S::send(5, 3, "m3"), S::recv(3, "m3"),
                     S::send(3, 1, "m5"), S::recv(1, "m5"), S::send(1, 2, "m7"), S::recv(2, "m7")}),
          {carries(kLazyFi, "m7", "t", 0, 2, src), carries(kLazyFi, "m7", "equal_incr", 3, 1, src),
           carries(kLazyFi, "m7", "taken", 2, 1, src), forced_at(kLazyFi, "m7", ForcedDecision{false, true}, src),
           z_consistent(kLazyFi, src), z_cycle(kNone, ck(1, 2), {"m7", "m4", "m6"}, src)}};
}

inline Scenario fine_proposal_steps(bool continued) {
  std::vector<Step> s{S::send(2, 3, "m1"), S::recv(3, "m1"), S::checkpoint(1), S::send(3, 1, "m2"),
                      S::recv(1, "m2"),    S::send(1, 2, "m3"), S::recv(2, "m3"), S::checkpoint(3)};
  if (continued) s.insert(s.end(), {S::send(3, 1, "m4"), S::recv(1, "m4")});
  return script(3, std::move(s));
}

inline Fixture fine_proposal() {
  using namespace claims;
  const std::string src = "harmless cycle under FINE";
  return {"fine-proposal",
          "a harmless cycle [m1, m2, m3]: FINE does not force at m3 and leaves C1^2.t = C3^2.t",
          fine_proposal_steps(false),
          {carries(kFine, "m1", "t", 0, 1, src), carries(kFine, "m3", "t", 0, 2, src),
           carries(kFine, "m3", "greater", 3, 1, src), carries(kFine, "m3", "taken", 2, 0, src),
           carries(kFine, "m3", "taken", 3, 0, src), not_forced_at(kFine, "m3", src),
           not_forced_at(kFineReceiver, "m3", src), receive_interval(kFine, "m3", 2, 1, src),
           timestamp(kFine, ck(1, 2), 2, src), timestamp(kFine, ck(3, 2), 2, src),
           violation(kFine, ck(1, 2), ck(3, 2), "harmless cycle under FINE"), useless(kFine, {}, src),
           forced_at(kFi, "m3", ForcedDecision{true, false}, src), z_consistent(kFi, src)}};
}

inline Fixture fine_counterexample() {
  using namespace claims;
  const std::string src = "FINE continuation";
  return {"fine-counterexample",
          "the FINE proposal continued with m4 from P3 to P1: P3's second checkpoint becomes useless",
          fine_proposal_steps(true),
          {forced_count(kFine, 0, src), useless(kFine, {ck(3, 2)}, src),
           z_cycle(kFine, ck(3, 2), {"m4", "m3", "m1"}, src), forced_count(kFineReceiver, 0, src),
           useless(kFineReceiver, {ck(3, 2)}, src), forced_count(kFi, 1, src), z_consistent(kFi, src),
           z_consistent(kFiClockv, src)}};
}

// P2 receives m1, m3 and m5 and sends m4 to P3; P4 checkpoints between
// receiving m2 and sending m5, so [m5, m4, m2] closes on C4^2.
inline Scenario lazy_fine_steps(bool continued) {
  std::vector<Step> s{S::send(1, 2, "m1"), S::recv(2, "m1"),    S::checkpoint(2), S::send(3, 4, "m2"),
                      S::recv(4, "m2"),    S::send(4, 2, "m3"), S::recv(2, "m3"), S::send(2, 3, "m4"),
                      S::recv(3, "m4"),    S::checkpoint(4)};
  if (continued) s.insert(s.end(), {S::send(4, 2, "m5"), S::recv(2, "m5")});
  return script(4, std::move(s));
}

inline Fixture lazy_fine_proposal() {
  using namespace claims;
  const std::string src = "Lazy-FINE precursor";
  return {"lazy-fine-proposal",
          "the harmless cycle [m4, m2, m3]: Lazy-FINE does not force at m4 and leaves C2^2.t = C4^2.t",
          lazy_fine_steps(false),
          {carries(kLazyFine, "m4", "t", 0, 2, src), before_receive(kLazyFine, "m4", "lc", 0, 1, src),
           carries(kLazyFine, "m4", "taken", 3, 0, src), carries(kLazyFine, "m4", "taken", 4, 0, src),
           not_forced_at(kLazyFine, "m4", src), not_forced_at(kLazyFineReceiver, "m4", src),
           useless(kLazyFine, {}, src), violation(kLazyFine, ck(2, 2), ck(4, 2), src),
           forced_at(kLazyFi, "m4", ForcedDecision{true, false}, src)}};
}

inline Fixture lazy_fine_counterexample() {
  using namespace claims;
  const std::string src = "Lazy-FINE continuation";
  return {"lazy-fine-counterexample",
          "m5 arrives at P2 with m5.t = lc_2, nothing is forced and the Z-cycle [m5, m4, m2] forms",
          lazy_fine_steps(true),
          {not_forced_at(kLazyFine, "m4", src), not_forced_at(kLazyFine, "m5", src),
           carries(kLazyFine, "m5", "t", 0, 2, src), before_receive(kLazyFine, "m5", "lc", 0, 2, src),
           z_cycle(kLazyFine, ck(4, 2), {"m5", "m4", "m2"}, src), useless(kLazyFine, {ck(4, 2)}, src),
           forced_count(kLazyFineReceiver, 0, src), useless(kLazyFineReceiver, {ck(4, 2)}, src),
           z_consistent(kLazyFi, src)}};
}

inline Scenario theorem1_steps(bool with_mj) {
  std::vector<Step> s{S::send(2, 3, "m1"), S::recv(3, "m1"),    S::checkpoint(1), S::checkpoint(1),
                      S::send(3, 1, "m2"), S::recv(1, "m2"),    S::send(1, 2, "m3"), S::recv(2, "m3"),
                      S::checkpoint(3)};
  if (with_mj) s.insert(s.end(), {S::send(3, 1, "m4"), S::recv(1, "m4")});
  return script(3, std::move(s));
}

inline Fixture theorem1_a() {
  using namespace claims;
  const std::string src = "violation without useless checkpoints";
  return {"theorem1-a",
          "a non-causal zigzag path [m3, m1] from C1^3 (t = 3) to C3^2 (t = 2) without useless checkpoints",
          theorem1_steps(false),
          {not_forced_at(kFine, "m3", src), timestamp(kFine, ck(1, 3), 3, src), timestamp(kFine, ck(3, 2), 2, src),
           zigzag(kFine, ck(1, 3), ck(3, 2), {"m3", "m1"}, false, src), violation(kFine, ck(1, 3), ck(3, 2), src),
           useless(kFine, {}, src)}};
}

inline Fixture theorem1_b() {
  using namespace claims;
  const std::string src = "violation closed by one message";
  return {"theorem1-b",
          "adding m4 from P3 (first event of I3^2) to P1 (inside I1^3) closes a Z-cycle through C3^2",
          theorem1_steps(true),
          {carries(kFine, "m4", "t", 0, 2, src), not_forced_at(kFine, "m4", src),
           z_cycle(kFine, ck(3, 2), {"m4", "m3", "m1"}, src), useless(kFine, {ck(3, 2)}, src),
           z_consistent(kFi, src)}};
}

inline Fixture empty() {
  using namespace claims;
  std::vector<FixtureClaim> cs;
  for (Protocol p : all_protocols()) {
    ProtocolConfig c{p};
    for (int q = 1; q <= 3; ++q) cs.push_back(timestamp(c, ck(q, 1), 1, "initial checkpoints"));
    cs.push_back(forced_count(c, 0, "initial checkpoints"));
    cs.push_back(z_consistent(c, "initial checkpoints"));
  }
  return {"empty", "three processes and no events besides their initial checkpoints", script(3, {}), std::move(cs)};
}

}  // namespace detail

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{
      "ccp",        "z-consistent",   "strict-a",       "strict-b",       "clockv-a",
      "clockv-b",   "greater-c",      "taken",          "lazy-a",         "lazy-b",
      "lazy-c",     "lazy-greater-a", "lazy-greater-b", "lazy-greater-c", "fine-proposal",
      "fine-counterexample", "lazy-fine-proposal", "lazy-fine-counterexample", "theorem1-a", "theorem1-b",
      "empty"};
  return names;
}

inline Fixture builtin(const std::string& name) {
  using namespace detail;
  static const std::map<std::string, Fixture (*)()> registry{
      {"ccp", ccp},
      {"z-consistent", z_consistent_fixture},
      {"strict-a", strict_a},
      {"strict-b", strict_b},
      {"clockv-a", clockv_a},
      {"clockv-b", clockv_b},
      {"greater-c", greater_c},
      {"taken", taken},
      {"lazy-a", lazy_a},
      {"lazy-b", lazy_b},
      {"lazy-c", lazy_c},
      {"lazy-greater-a", lazy_greater_a},
      {"lazy-greater-b", lazy_greater_b},
      {"lazy-greater-c", lazy_greater_c},
      {"fine-proposal", fine_proposal},
      {"fine-counterexample", fine_counterexample},
      {"lazy-fine-proposal", lazy_fine_proposal},
      {"lazy-fine-counterexample", lazy_fine_counterexample},
      {"theorem1-a", theorem1_a},
      {"theorem1-b", theorem1_b},
      {"empty", empty},
  };
  auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
    throw UnknownFixture("unknown scenario '" + name + "'; built-in scenarios: " + known);
  }
  return it->second();
}

}  // namespace cic
