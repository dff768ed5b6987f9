#include <gtest/gtest.h>

#include "cic/campaign.hpp"
#include "cic/fixtures.hpp"

using namespace cic;

namespace {

CheckpointId C(int p, int x) { return {ProcessId{p}, x}; }

Trace run_of(const std::string& fixture, Protocol p) { return run_scenario(builtin(fixture).scenario, p).trace; }

Trace suite_trace(std::uint64_t k, Protocol p, std::uint64_t base = 3) {
  return run_scenario(random_scenario(fuzz_suite_params(k, base)), p).trace;
}

// Checks a witness against the zigzag definition directly: consecutive
// messages chain through same-or-later intervals, the first leaves `from`'s
// process at or after `from`, the last arrives before `to`.
bool is_zigzag(const ZigzagWitness& w, const Trace& t) {
  if (w.messages.empty()) return false;
  auto table = t.messages();
  auto ckpt_count = [&](ProcessId p) { return static_cast<int>(t.checkpoints_of(p).size()); };
  std::optional<Interval> prev_recv;
  for (std::size_t k = 0; k < w.messages.size(); ++k) {
    auto it = table.find(w.messages[k]);
    if (it == table.end() || !it->second.receive_index) return false;
    Interval s = interval_of(it->second.send_index, t);
    if (k == 0) {
      if (s.process != w.from.process || s.index < w.from.ordinal) return false;
    } else if (s.process != prev_recv->process || s.index < prev_recv->index) {
      return false;
    }
    prev_recv = interval_of(*it->second.receive_index, t);
  }
  const int limit = w.to.ordinal;  // ordinal count + 1 names the virtual terminal
  return prev_recv->process == w.to.process && prev_recv->index < limit && limit <= ckpt_count(w.to.process) + 1;
}

}  // namespace

TEST(Zigzag, CausalPath) {
  Trace t = run_of("ccp", Protocol::none);
  auto w = zigzag_exists(C(1, 1), C(3, 2), t);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->messages, (std::vector<std::string>{"m1", "m2"}));
  EXPECT_TRUE(w->causal);
  EXPECT_TRUE(is_zigzag(*w, t));
}

TEST(Zigzag, NonCausalPath) {
  Trace t = run_of("ccp", Protocol::none);
  auto w = zigzag_exists(C(1, 2), C(3, 3), t);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->messages, (std::vector<std::string>{"m4", "m3"}));
  EXPECT_FALSE(w->causal);
}

TEST(Zigzag, MessageFreeTrace) {
  Trace t = TraceBuilder(3, 1).trace();
  for (int p = 1; p <= 3; ++p) EXPECT_FALSE(zigzag_exists(C(p, 1), C(p, 1), t));
}

TEST(ZCycles, CcpWitnesses) {
  Trace t = run_of("ccp", Protocol::none);
  auto cycles = find_z_cycles(t);
  std::vector<std::vector<std::string>> at_c33;
  for (const ZCycle& z : cycles) {
    EXPECT_EQ(z.checkpoint, C(3, 3));
    EXPECT_TRUE(is_zigzag(z.witness, t));
    at_c33.push_back(z.witness.messages);
  }
  EXPECT_EQ(at_c33, (std::vector<std::vector<std::string>>{{"m6", "m3"}, {"m6", "m5", "m4", "m3"}}));
}

TEST(ZCycles, ForcedCheckpointRemovesThem) {
  EXPECT_TRUE(find_z_cycles(run_of("z-consistent", Protocol::none)).empty());
}

TEST(ZCycles, SingleProcess) {
  TraceBuilder b(1, 1);
  b.checkpoint(ProcessId{1}, CheckpointKind::basic, 2);
  b.internal(ProcessId{1});
  EXPECT_TRUE(find_z_cycles(b.trace()).empty());
  EXPECT_TRUE(useless_checkpoints(b.trace()).empty());
}

TEST(Useless, Examples) {
  EXPECT_EQ(useless_checkpoints(run_of("ccp", Protocol::none)), (std::set<CheckpointId>{C(3, 3)}));
  EXPECT_TRUE(useless_checkpoints(run_of("ccp", Protocol::fi_greater)).empty());
  EXPECT_TRUE(useless_checkpoints(run_of("ccp", Protocol::fi_clockv)).empty());
  EXPECT_TRUE(useless_checkpoints(run_of("fine-counterexample", Protocol::fine)).count(C(3, 2)));
}

TEST(ZConsistency, Examples) {
  auto has = [](const std::vector<ZConsistencyViolation>& v, CheckpointId a, CheckpointId b) {
    return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.from.id() == a && x.to.id() == b; });
  };
  auto ccp = check_z_consistency(run_of("ccp", Protocol::none));
  EXPECT_TRUE(has(ccp, C(3, 3), C(1, 3)));
  auto fine = check_z_consistency(run_of("fine-proposal", Protocol::fine));
  ASSERT_TRUE(has(fine, C(1, 2), C(3, 2)));
  for (const auto& v : fine)
    if (v.from.id() == C(1, 2)) {
      EXPECT_EQ(v.from.timestamp, v.to.timestamp);
    }
}

TEST(ZConsistency, RequiresTimestamps) {
  TraceBuilder b(2);
  EXPECT_THROW(check_z_consistency(b.trace()), std::invalid_argument);
  OracleReport r = analyze(b.trace());
  EXPECT_TRUE(r.z_consistency_violations.empty());
}

TEST(ZConsistency, LazyFiOnFuzzTraces) {
  for (std::uint64_t k = 0; k < 300; ++k) EXPECT_TRUE(check_z_consistency(suite_trace(k, Protocol::lazy_fi)).empty());
}

TEST(Membership, CcpAllButUseless) {
  Trace t = run_of("ccp", Protocol::none);
  std::set<CheckpointId> all;
  for (const auto& c : t.checkpoints()) all.insert(c.id());
  all.erase(C(3, 3));
  EXPECT_EQ(consistent_membership_bruteforce(t), all);
}

TEST(Membership, MessageFree) {
  TraceBuilder b(3, 1);
  b.checkpoint(ProcessId{2}, CheckpointKind::basic, 2);
  b.checkpoint(ProcessId{2}, CheckpointKind::basic, 3);
  std::set<CheckpointId> all;
  for (const auto& c : b.trace().checkpoints()) all.insert(c.id());
  EXPECT_EQ(consistent_membership_bruteforce(b.trace()), all);
}

TEST(Membership, Budget) {
  Trace t = run_of("ccp", Protocol::none);
  EXPECT_THROW(consistent_membership_bruteforce(t, 5), BudgetExceeded);
}

// Useless checkpoints are exactly those outside every consistent global
// checkpoint.
TEST(Membership, ComplementOfUselessOnFuzzTraces) {
  std::size_t checked = 0, with_useless = 0;
  for (std::uint64_t k = 0; checked < 60; ++k) {
    Trace t = suite_trace(k, Protocol::none, 11);
    if (t.n > 4) continue;
    std::set<CheckpointId> useful;
    try {
      useful = consistent_membership_bruteforce(t, 200'000);
    } catch (const BudgetExceeded&) {
      continue;
    }
    ++checked;
    std::set<CheckpointId> complement;
    for (const auto& c : t.checkpoints())
      if (!useful.count(c.id())) complement.insert(c.id());
    auto useless = useless_checkpoints(t);
    with_useless += !useless.empty();
    ASSERT_EQ(useless, complement) << "suite scenario " << k;
  }
  EXPECT_GT(with_useless, 0u);
}

// A causal chain of messages between checkpoints is a zigzag path.
TEST(ZigzagProperty, CausalityImpliesZigzag) {
  for (std::uint64_t k = 0; k < 150; ++k) {
    Trace t = suite_trace(k, Protocol::none);
    CausalOrder order(t);
    ZigzagGraph g(t);
    auto cks = t.checkpoints();
    for (const auto& a : cks)
      for (const auto& b : cks) {
        if (a.process == b.process) continue;
        if (order.precedes(*t.find_checkpoint(a.id()), *t.find_checkpoint(b.id()))) {
          auto w = g.shortest(a.id(), b.id());
          ASSERT_TRUE(w) << to_string(a.id()) << " -> " << to_string(b.id());
          ASSERT_TRUE(is_zigzag(*w, t));
        }
      }
  }
}

TEST(ZigzagProperty, WitnessesSatisfyDefinition) {
  for (std::uint64_t k = 0; k < 150; ++k) {
    Trace t = suite_trace(k, Protocol::none);
    OracleReport r = analyze(t);
    for (const auto& z : r.z_cycles) ASSERT_TRUE(is_zigzag(z.witness, t));
    for (const auto& v : r.z_consistency_violations) {
      ASSERT_TRUE(is_zigzag(v.witness, t));
      ASSERT_GE(*v.from.timestamp, *v.to.timestamp);
    }
  }
}

// Z-consistent runs have no Z-cycles, and checkpoints sharing a timestamp
// across all processes form a consistent global checkpoint.
TEST(ZigzagProperty, ZConsistencyExcludesCycles) {
  for (std::uint64_t k = 0; k < 200; ++k) {
    for (Protocol p : {Protocol::fi_greater, Protocol::lazy_fi, Protocol::pi}) {
      Trace t = suite_trace(k, p);
      if (!check_z_consistency(t).empty()) continue;
      ASSERT_TRUE(find_z_cycles(t).empty());
      std::map<int, std::map<int, CheckpointId>> by_t;  // t -> process -> first checkpoint
      for (const auto& c : t.checkpoints()) by_t[*c.timestamp].emplace(c.process.value(), c.id());
      for (const auto& [ts, row] : by_t) {
        if (static_cast<int>(row.size()) != t.n) continue;
        std::vector<CheckpointId> set;
        for (const auto& [q, c] : row) set.push_back(c);
        ASSERT_TRUE(is_consistent_global_checkpoint(set, t)) << "t=" << ts;
      }
    }
  }
}
